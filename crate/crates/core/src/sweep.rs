//! Mission time of every planner across a grid of SNR targets.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bench::cell;
use crate::error::{Error, Result};
use crate::handover::SolverConfig;
use crate::parallel::{map_ordered, Execution};
use crate::plan::{OptimalSearch, Planner};
use crate::scenario::{compute_coverage_radius, Scenario, SnrTarget};
use crate::trajectory::straight_flight_threshold;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub rho_db: f64,
    /// `None` when the target is above what a GBS delivers overhead.
    pub d_bar: Option<f64>,
    /// Mission times in seconds; `None` when that planner is infeasible.
    pub t_proposed: Option<f64>,
    pub t_optimal: Option<f64>,
    pub t_straight: Option<f64>,
}

impl SweepRow {
    pub fn feasible(&self) -> bool {
        self.t_proposed.is_some()
    }

    pub fn straight_feasible(&self) -> bool {
        self.t_straight.is_some()
    }
}

/// Plans with all three methods at each target. The grid must be non-empty
/// and strictly ascending.
pub fn sweep_snr(
    s: &Scenario,
    rho_grid: &[f64],
    solver: &SolverConfig,
    max_paths: usize,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    s.validate()?;
    if rho_grid.is_empty() {
        return Err(Error::InvalidArgument("SNR grid is empty".into()));
    }
    if rho_grid.iter().any(|r| !r.is_finite()) || rho_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("SNR grid must be finite and strictly ascending".into()));
    }
    // Straight flight is feasible exactly while d_bar covers its worst point.
    let worst = straight_flight_threshold(s).worst_distance;
    let straight_time = s.u0.distance(s.uf) / s.vmax;
    let rows = map_ordered(rho_grid, exec, |&rho_db| -> Result<SweepRow> {
        let mut row = SweepRow { rho_db, d_bar: None, t_proposed: None, t_optimal: None, t_straight: None };
        let d_bar = match compute_coverage_radius(s, SnrTarget::new(rho_db)) {
            Ok(d) => d,
            Err(Error::UnattainableSnr { .. }) => return Ok(row),
            Err(e) => return Err(e),
        };
        row.d_bar = Some(d_bar.meters());
        let planner = Planner::new(s, d_bar, solver.clone())?.with_execution(exec);
        let prop = planner.proposed()?;
        if prop.is_feasible() {
            row.t_proposed = Some(prop.total_time);
            row.t_optimal = Some(planner.optimal(max_paths, OptimalSearch::default())?.total_time);
        }
        if worst <= d_bar.meters() {
            row.t_straight = Some(straight_time);
        }
        Ok(row)
    });
    rows.into_iter().collect()
}

/// `rho_db,T_proposed,T_optimal,T_straight,straight_feasible,feasible,d_bar_m`;
/// infinite times are empty cells.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("rho_db,T_proposed,T_optimal,T_straight,straight_feasible,feasible,d_bar_m\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            cell(Some(r.rho_db)),
            cell(r.t_proposed),
            cell(r.t_optimal),
            cell(r.t_straight),
            r.straight_feasible(),
            r.feasible(),
            cell(r.d_bar),
        );
    }
    out
}

/// `steps` evenly spaced targets from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(min.is_finite() && max.is_finite()) || (steps > 1 && max <= min) {
        return Err(Error::InvalidArgument(format!("cannot build {steps} steps from {min} to {max}")));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps).map(|k| min + (max - min) * k as f64 / (steps - 1) as f64).collect())
}
