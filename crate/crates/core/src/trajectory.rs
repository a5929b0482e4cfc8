//! Time-parameterized trajectories: reconstruction from handover points,
//! interpolation, connectivity verification, and the straight-flight
//! baseline.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::association::AssociationSequence;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::handover::HandoverSolution;
use crate::scenario::{nearest_gbs, Scenario};

/// Spatial resolution of the sampled coverage audit, meters.
pub const AUDIT_RESOLUTION_M: f64 = 1.0;
/// Coverage slack for verification, as a multiple of the coverage radius.
pub const VERIFY_TOL: f64 = 1e-6;
/// Sampling resolution along the straight path for the threshold search.
pub const THRESHOLD_RESOLUTION_M: f64 = 0.1;

/// Piecewise-linear flight at maximum speed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `[u0, u1, ..., uN]`.
    pub waypoints: Vec<Point>,
    /// Serving GBS (zero-based) for each of the `N` segments.
    pub associations: Vec<usize>,
    /// Per-segment flight time, seconds.
    pub durations: Vec<f64>,
    pub total_time: f64,
    pub vmax: f64,
    /// When set, the UAV is served by whichever GBS is closest at each instant
    /// and `associations` is informational only.
    pub nearest_association: bool,
}

impl Trajectory {
    /// A UAV that never leaves `at`.
    pub fn hold(at: Point, vmax: f64) -> Self {
        Self {
            waypoints: vec![at],
            associations: Vec::new(),
            durations: Vec::new(),
            total_time: 0.0,
            vmax,
            nearest_association: false,
        }
    }

    pub fn num_segments(&self) -> usize {
        self.durations.len()
    }

    pub fn path_length(&self) -> f64 {
        crate::geometry::polyline_length(&self.waypoints)
    }

    /// Mission time at which waypoint `i` is reached.
    pub fn waypoint_time(&self, i: usize) -> f64 {
        self.durations[..i].iter().sum()
    }

    /// Segment active at time `t` (skipping zero-length segments), if any.
    fn segment_at(&self, t: f64) -> Option<usize> {
        let mut start = 0.0;
        let mut last = None;
        for (i, &d) in self.durations.iter().enumerate() {
            if d > 0.0 {
                last = Some(i);
                if t <= start + d {
                    return Some(i);
                }
            }
            start += d;
        }
        last
    }

    /// GBS serving the UAV at `t`.
    pub fn associated_gbs(&self, s: &Scenario, t: f64) -> Result<usize> {
        let p = sample_position(self, t)?;
        if self.nearest_association || self.associations.is_empty() {
            return Ok(nearest_gbs(s, p).0);
        }
        let seg = self.segment_at(t).unwrap_or(0);
        Ok(self.associations[seg])
    }

    /// CSV rows `t_s,x_m,y_m,associated_gbs,snr_db` every `dt` seconds, plus a
    /// final row at the arrival time. GBS indices are one-based.
    pub fn to_samples_csv(&self, s: &Scenario, dt: f64) -> Result<String> {
        if !(dt > 0.0) {
            return Err(Error::InvalidScenario(format!("sampling interval must be positive, got {dt}")));
        }
        let mut out = String::from("t_s,x_m,y_m,associated_gbs,snr_db\n");
        let mut k = 0u64;
        loop {
            let t = (k as f64 * dt).min(self.total_time);
            let p = sample_position(self, t)?;
            let g = self.associated_gbs(s, t)?;
            let snr = s.snr_at_distance(p.distance(s.gbs(g)));
            writeln!(out, "{t:.6},{:.6},{:.6},{},{snr:.6}", p.x, p.y, g + 1).unwrap();
            if t >= self.total_time {
                break;
            }
            k += 1;
        }
        Ok(out)
    }

    /// CSV rows `i,x,y,gbs,T_i`; row `i` is the waypoint reached at the end of
    /// segment `i`, served by `gbs`. Row 0 is the start.
    pub fn to_waypoints_csv(&self) -> String {
        let mut out = String::from("i,x,y,gbs,T_i\n");
        for (i, p) in self.waypoints.iter().enumerate() {
            if i == 0 {
                writeln!(out, "0,{:.6},{:.6},,0.000000", p.x, p.y).unwrap();
            } else {
                writeln!(
                    out,
                    "{i},{:.6},{:.6},{},{:.6}",
                    p.x,
                    p.y,
                    self.associations[i - 1] + 1,
                    self.durations[i - 1]
                )
                .unwrap();
            }
        }
        out
    }
}

/// Full-speed trajectory through the handover points: `T_i = |ui - u(i-1)| / vmax`.
pub fn build_trajectory(sol: &HandoverSolution, seq: &AssociationSequence, vmax: f64) -> Result<Trajectory> {
    if sol.points.len() != seq.len() + 1 {
        return Err(Error::InvalidSequence(format!(
            "{} handover points do not match a sequence of length {}",
            sol.points.len(),
            seq.len()
        )));
    }
    if !(vmax > 0.0 && vmax.is_finite()) {
        return Err(Error::InvalidScenario(format!("vmax must be positive, got {vmax}")));
    }
    let durations: Vec<f64> = sol.points.windows(2).map(|w| w[0].distance(w[1]) / vmax).collect();
    let total_time = durations.iter().sum();
    Ok(Trajectory {
        waypoints: sol.points.clone(),
        associations: seq.indices().to_vec(),
        durations,
        total_time,
        vmax,
        nearest_association: false,
    })
}

/// Position at time `t`, moving at `vmax` along the active segment.
pub fn sample_position(traj: &Trajectory, t: f64) -> Result<Point> {
    if !(t >= 0.0 && t <= traj.total_time) {
        return Err(Error::OutOfRange { t, total: traj.total_time });
    }
    let mut start = 0.0;
    for (i, &d) in traj.durations.iter().enumerate() {
        if d > 0.0 && t <= start + d {
            let frac = (t - start) / d;
            return Ok(if frac >= 1.0 {
                traj.waypoints[i + 1]
            } else {
                traj.waypoints[i].lerp(traj.waypoints[i + 1], frac)
            });
        }
        start += d;
    }
    Ok(*traj.waypoints.last().expect("trajectory has a start point"))
}

/// An endpoint of a segment lying outside its serving GBS's coverage disk.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentViolation {
    pub segment: usize,
    pub t: f64,
    /// Excess distance beyond the coverage radius, meters.
    pub margin: f64,
}

/// A stretch of the flight with no GBS within the coverage radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageGap {
    pub t_start: f64,
    pub t_end: f64,
    pub worst_t: f64,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ConnectivityReport {
    pub segment_violations: Vec<SegmentViolation>,
    pub gaps: Vec<CoverageGap>,
    pub samples_checked: usize,
}

impl ConnectivityReport {
    pub fn is_clean(&self) -> bool {
        self.segment_violations.is_empty() && self.gaps.is_empty()
    }
}

/// Checks every segment against its serving GBS (both endpoints inside the
/// disk means the whole segment is), then audits the closest-GBS distance
/// along the path at `AUDIT_RESOLUTION_M` spacing.
pub fn verify_connectivity(s: &Scenario, traj: &Trajectory, d_bar: f64) -> ConnectivityReport {
    let tol = VERIFY_TOL * d_bar;
    let mut report = ConnectivityReport::default();
    if !traj.nearest_association {
        let mut t0 = 0.0;
        for (i, &g) in traj.associations.iter().enumerate() {
            let t1 = t0 + traj.durations[i];
            for (p, t) in [(traj.waypoints[i], t0), (traj.waypoints[i + 1], t1)] {
                let margin = p.distance(s.gbs(g)) - d_bar;
                if margin > tol {
                    report.segment_violations.push(SegmentViolation { segment: i, t, margin });
                }
            }
            t0 = t1;
        }
    }

    let mut open: Option<CoverageGap> = None;
    let mut check = |p: Point, t: f64, report: &mut ConnectivityReport| {
        report.samples_checked += 1;
        let margin = nearest_gbs(s, p).1 - d_bar;
        if margin > tol {
            match open.as_mut() {
                Some(gap) => {
                    gap.t_end = t;
                    if margin > gap.worst_margin {
                        gap.worst_margin = margin;
                        gap.worst_t = t;
                    }
                }
                None => open = Some(CoverageGap { t_start: t, t_end: t, worst_t: t, worst_margin: margin }),
            }
        } else if let Some(gap) = open.take() {
            report.gaps.push(gap);
        }
    };
    check(traj.waypoints[0], 0.0, &mut report);
    let mut t0 = 0.0;
    for (i, w) in traj.waypoints.windows(2).enumerate() {
        let len = w[0].distance(w[1]);
        let d = traj.durations[i];
        let n = (len / AUDIT_RESOLUTION_M).ceil() as usize;
        for k in 1..=n {
            let f = k as f64 / n as f64;
            check(w[0].lerp(w[1], f), t0 + f * d, &mut report);
        }
        t0 += d;
    }
    if let Some(gap) = open.take() {
        report.gaps.push(gap);
    }
    report
}

/// Direct flight from `u0` to `uF` at `vmax`, nominally served by the GBS
/// closest to the midpoint. It may leave coverage.
pub fn straight_flight(s: &Scenario) -> Trajectory {
    let mid = s.u0.lerp(s.uf, 0.5);
    let (g, _) = nearest_gbs(s, mid);
    let d = s.u0.distance(s.uf) / s.vmax;
    Trajectory {
        waypoints: vec![s.u0, s.uf],
        associations: vec![g],
        durations: vec![d],
        total_time: d,
        vmax: s.vmax,
        nearest_association: true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StraightThreshold {
    /// Largest SNR target the straight path satisfies everywhere, dB.
    pub rho_s_db: f64,
    /// Largest closest-GBS distance along the path, meters.
    pub worst_distance: f64,
    /// Fraction of the way from `u0` to `uF` where it occurs.
    pub worst_fraction: f64,
}

/// Worst closest-GBS distance along the straight path, by dense sampling plus
/// golden-section refinement around every sampled local maximum.
pub fn straight_flight_threshold(s: &Scenario) -> StraightThreshold {
    let len = s.u0.distance(s.uf);
    let dist = |f: f64| nearest_gbs(s, s.u0.lerp(s.uf, f)).1;
    let n = ((len / THRESHOLD_RESOLUTION_M).ceil() as usize).max(1);
    let samples: Vec<f64> = (0..=n).map(|k| dist(k as f64 / n as f64)).collect();
    let mut best = (samples[0], 0.0);
    for k in 0..=n {
        let v = samples[k];
        let left = if k > 0 { samples[k - 1] } else { f64::NEG_INFINITY };
        let right = if k < n { samples[k + 1] } else { f64::NEG_INFINITY };
        if v < left || v < right {
            continue;
        }
        let f = k as f64 / n as f64;
        if v > best.0 {
            best = (v, f);
        }
        if k > 0 && k < n {
            let lo = (k - 1) as f64 / n as f64;
            let hi = (k + 1) as f64 / n as f64;
            let (fm, vm) = golden_max(&dist, lo, hi, 1e-9 / len.max(1.0));
            if vm > best.0 {
                best = (vm, fm);
            }
        }
    }
    StraightThreshold { rho_s_db: s.snr_for_radius(best.0), worst_distance: best.0, worst_fraction: best.1 }
}

/// Golden-section search for the maximum of a unimodal `f` on `[lo, hi]`.
fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    let m = 0.5 * (lo + hi);
    (m, f(m))
}
