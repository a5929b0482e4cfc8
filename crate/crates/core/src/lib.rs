//! Minimum-time UAV trajectories that keep a ground cellular link at or above
//! a target SNR throughout the flight.

pub mod association;
pub mod bench;
pub mod connectivity;
pub mod error;
pub mod geodesic;
pub mod geometry;
pub mod handover;
pub mod parallel;
pub mod plan;
pub mod scenario;
pub mod svg;
pub mod sweep;
pub mod trajectory;

pub use error::{Error, Result};
