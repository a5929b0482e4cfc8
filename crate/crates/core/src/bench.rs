//! Monte-Carlo comparison of the shortest-path heuristic against the optimal
//! planner on random GBS layouts.
//!
//! Instance `k` draws its GBS positions from a ChaCha8 stream seeded with
//! `rng_seed` and stream id `k`, so any single instance can be regenerated
//! without replaying the ones before it.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::association::{AssociationSequence, DEFAULT_MAX_PATHS};
use crate::connectivity::max_attainable_snr;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::handover::SolverConfig;
use crate::parallel::{map_ordered, Execution};
use crate::plan::{OptimalSearch, Planner};
use crate::scenario::{compute_coverage_radius, CoverageRadius, Scenario, SnrTarget};

/// Largest GBS count benchmarked without an explicit override; simple-route
/// counts grow factorially beyond it.
pub const LARGE_M: usize = 12;

/// SNR target used for each instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RhoMode {
    /// The instance's own maximum attainable target, so every instance is
    /// feasible with at least one bottleneck link exactly at the radius.
    PerInstanceMax,
    /// One fixed target in dB; instances that cannot meet it count as
    /// infeasible.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchConfig {
    pub instance_count: usize,
    pub num_gbs: usize,
    pub region_width: f64,
    pub region_height: f64,
    pub u0: Point,
    pub uf: Point,
    pub uav_altitude: f64,
    pub gbs_altitude: f64,
    pub vmax: f64,
    pub gamma0_db: f64,
    pub rng_seed: u64,
    pub max_paths: usize,
    pub rho: RhoMode,
    pub solver: SolverConfig,
    pub search: OptimalSearch,
    /// Permit `num_gbs > LARGE_M`.
    pub allow_large_m: bool,
}

impl Default for BenchConfig {
    /// 11 GBSs in a 10 km square, flying from (2000, 2000) to (8000, 8000)
    /// at 90 m and 50 m/s, GBSs at 12.5 m, 80 dB reference SNR.
    fn default() -> Self {
        Self {
            instance_count: 100,
            num_gbs: 11,
            region_width: 10_000.0,
            region_height: 10_000.0,
            u0: Point::new(2000.0, 2000.0),
            uf: Point::new(8000.0, 8000.0),
            uav_altitude: 90.0,
            gbs_altitude: 12.5,
            vmax: 50.0,
            gamma0_db: 80.0,
            rng_seed: 2019,
            max_paths: DEFAULT_MAX_PATHS,
            rho: RhoMode::PerInstanceMax,
            solver: SolverConfig::default(),
            search: OptimalSearch::default(),
            allow_large_m: false,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instance_count == 0 {
            return Err(Error::InvalidArgument("instance count must be at least 1".into()));
        }
        if self.num_gbs == 0 {
            return Err(Error::InvalidArgument("at least one GBS is required".into()));
        }
        if !(self.region_width > 0.0 && self.region_height > 0.0 && self.region_width.is_finite() && self.region_height.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "region must be positive, got {} x {}",
                self.region_width, self.region_height
            )));
        }
        if self.num_gbs > LARGE_M && !self.allow_large_m {
            return Err(Error::ResourceLimit(format!(
                "exhaustive search over {} GBSs may not finish; the limit without an override is {LARGE_M}",
                self.num_gbs
            )));
        }
        self.solver.validate()?;
        self.scenario_with(Vec::new()).validate_radio()
    }

    fn scenario_with(&self, gbs_positions: Vec<Point>) -> Scenario {
        Scenario {
            gbs_positions,
            u0: self.u0,
            uf: self.uf,
            uav_altitude: self.uav_altitude,
            gbs_altitude: self.gbs_altitude,
            vmax: self.vmax,
            gamma0_db: self.gamma0_db,
        }
    }

    /// The scenario for instance `index`.
    pub fn instance(&self, index: usize) -> Scenario {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(index as u64);
        let gbs = (0..self.num_gbs)
            .map(|_| {
                let x = rng.random_range(0.0..self.region_width);
                let y = rng.random_range(0.0..self.region_height);
                Point::new(x, y)
            })
            .collect();
        self.scenario_with(gbs)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum InstanceStatus {
    Solved,
    Infeasible,
    Failed(String),
}

impl InstanceStatus {
    fn label(&self) -> &'static str {
        match self {
            InstanceStatus::Solved => "solved",
            InstanceStatus::Infeasible => "infeasible",
            InstanceStatus::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub status: InstanceStatus,
    pub rho_db: f64,
    pub d_bar: f64,
    pub t_proposed: Option<f64>,
    pub t_optimal: Option<f64>,
    /// `(T_proposed - T_optimal) / T_optimal`, in percent.
    pub gap_pct: Option<f64>,
    pub seq_proposed: Option<AssociationSequence>,
    pub seq_optimal: Option<AssociationSequence>,
    pub sequences_evaluated: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSummary {
    pub instance_count: usize,
    pub num_gbs: usize,
    pub rng_seed: u64,
    pub instances: Vec<InstanceOutcome>,
    pub solved_count: usize,
    pub infeasible_count: usize,
    pub failed_count: usize,
    pub mean_gap_pct: f64,
    pub max_gap_pct: f64,
    pub min_gap_pct: f64,
}

impl BenchmarkSummary {
    fn from_outcomes(cfg: &BenchConfig, instances: Vec<InstanceOutcome>) -> Self {
        let gaps: Vec<f64> = instances.iter().filter_map(|o| o.gap_pct).collect();
        let count = |label: &str| instances.iter().filter(|o| o.status.label() == label).count();
        let (mean, max, min) = if gaps.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            (
                gaps.iter().sum::<f64>() / gaps.len() as f64,
                gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                gaps.iter().copied().fold(f64::INFINITY, f64::min),
            )
        };
        Self {
            instance_count: cfg.instance_count,
            num_gbs: cfg.num_gbs,
            rng_seed: cfg.rng_seed,
            solved_count: count("solved"),
            infeasible_count: count("infeasible"),
            failed_count: count("failed"),
            instances,
            mean_gap_pct: mean,
            max_gap_pct: max,
            min_gap_pct: min,
        }
    }

    /// One-row summary. Undefined statistics are empty cells.
    pub fn to_summary_csv(&self) -> String {
        let mut out = String::from(
            "instances,num_gbs,rng_seed,solved,infeasible,failed,mean_gap_pct,max_gap_pct,min_gap_pct\n",
        );
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            self.instance_count,
            self.num_gbs,
            self.rng_seed,
            self.solved_count,
            self.infeasible_count,
            self.failed_count,
            cell(Some(self.mean_gap_pct)),
            cell(Some(self.max_gap_pct)),
            cell(Some(self.min_gap_pct)),
        );
        out
    }

    /// One row per instance. Sequences are one-based and quoted.
    pub fn to_instances_csv(&self) -> String {
        let mut out = String::from(
            "instance,status,rho_db,d_bar_m,t_proposed_s,t_optimal_s,gap_pct,seq_proposed,seq_optimal,sequences_evaluated\n",
        );
        for o in &self.instances {
            let seq = |s: &Option<AssociationSequence>| s.as_ref().map(|s| format!("\"{s}\"")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                o.index,
                o.status.label(),
                cell(Some(o.rho_db)),
                cell(Some(o.d_bar)),
                cell(o.t_proposed),
                cell(o.t_optimal),
                cell(o.gap_pct),
                seq(&o.seq_proposed),
                seq(&o.seq_optimal),
                o.sequences_evaluated,
            );
        }
        out
    }
}

/// Fixed-precision CSV cell; missing or non-finite values are empty.
pub(crate) fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x:.9}"),
        _ => String::new(),
    }
}

fn run_instance(cfg: &BenchConfig, index: usize, exec: Execution) -> InstanceOutcome {
    let s = cfg.instance(index);
    let mut outcome = InstanceOutcome {
        index,
        status: InstanceStatus::Infeasible,
        rho_db: f64::NAN,
        d_bar: f64::NAN,
        t_proposed: None,
        t_optimal: None,
        gap_pct: None,
        seq_proposed: None,
        seq_optimal: None,
        sequences_evaluated: 0,
    };
    let radius: Result<CoverageRadius> = match cfg.rho {
        // Plan at the critical radius itself: converting through dB and back
        // could drop the bottleneck edge to rounding.
        RhoMode::PerInstanceMax => max_attainable_snr(&s).and_then(|m| {
            outcome.rho_db = m.rho_max_db;
            CoverageRadius::new(m.critical_d_bar)
        }),
        RhoMode::Fixed(rho_db) => {
            outcome.rho_db = rho_db;
            compute_coverage_radius(&s, SnrTarget::new(rho_db))
        }
    };
    let d_bar = match radius {
        Ok(d) => d,
        Err(Error::UnattainableSnr { .. } | Error::Unreachable) => return outcome,
        Err(e) => {
            outcome.status = InstanceStatus::Failed(e.to_string());
            return outcome;
        }
    };
    outcome.d_bar = d_bar.meters();
    let result = Planner::new(&s, d_bar, cfg.solver.clone()).and_then(|p| {
        let p = p.with_execution(exec);
        Ok((p.proposed()?, p.optimal(cfg.max_paths, cfg.search)?))
    });
    match result {
        Ok((prop, opt)) if prop.is_feasible() && opt.is_feasible() => {
            let gap = if opt.total_time > 0.0 {
                (prop.total_time - opt.total_time) / opt.total_time * 100.0
            } else {
                0.0
            };
            outcome.status = InstanceStatus::Solved;
            outcome.t_proposed = Some(prop.total_time);
            outcome.t_optimal = Some(opt.total_time);
            outcome.gap_pct = Some(gap);
            outcome.seq_proposed = prop.sequence;
            outcome.seq_optimal = opt.sequence;
            outcome.sequences_evaluated = opt.sequences_evaluated;
        }
        Ok(_) => {}
        Err(e) => outcome.status = InstanceStatus::Failed(e.to_string()),
    }
    outcome
}

/// Runs every instance and aggregates in instance order, so the summary does
/// not depend on scheduling. Per-instance failures are recorded, not raised.
pub fn run_benchmark(cfg: &BenchConfig, exec: Execution) -> Result<BenchmarkSummary> {
    cfg.validate()?;
    let indices: Vec<usize> = (0..cfg.instance_count).collect();
    let outcomes = map_ordered(&indices, exec, |&k| run_instance(cfg, k, exec));
    Ok(BenchmarkSummary::from_outcomes(cfg, outcomes))
}
