use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("scenario parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(
        "SNR target {rho_db:.4} dB is unattainable: the SNR directly above a GBS is only {overhead_db:.4} dB"
    )]
    UnattainableSnr { rho_db: f64, overhead_db: f64 },

    #[error("no connected route from the initial to the final location")]
    Infeasible,

    #[error("the initial and final locations cannot be connected at any coverage radius")]
    Unreachable,

    #[error("more than {limit} candidate association sequences; raise the limit or use fewer GBSs")]
    TooManyPaths { limit: usize },

    #[error("{0}")]
    ResourceLimit(String),

    #[error("association sequence repeats GBS {gbs} at consecutive positions {position} and {next}", next = position + 1)]
    DegenerateSequence { position: usize, gbs: usize },

    #[error("association sequence is not valid for this coverage radius: {0}")]
    InvalidSequence(String),

    #[error("time {t} s is outside the mission interval [0, {total}] s")]
    OutOfRange { t: f64, total: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
