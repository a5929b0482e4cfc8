//! Problem instances and the radio geometry that turns an SNR target into a
//! horizontal coverage radius.
//!
//! The UAV flies at a fixed altitude `H`, every GBS sits at altitude `HG`, and
//! the line-of-sight channel gives a received SNR of
//! `gamma0 / ((H - HG)^2 + r^2)` at horizontal distance `r` from the serving
//! GBS. A target SNR is therefore met exactly when `r <= d_bar` with
//! `d_bar = sqrt(gamma0 / rho - (H - HG)^2)`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Decibels to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// An immutable planning instance. Units are meters and seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    #[serde(rename = "gbs")]
    pub gbs_positions: Vec<Point>,
    pub u0: Point,
    #[serde(rename = "uF")]
    pub uf: Point,
    /// UAV altitude.
    #[serde(rename = "H")]
    pub uav_altitude: f64,
    /// Common GBS antenna altitude.
    #[serde(rename = "HG")]
    pub gbs_altitude: f64,
    pub vmax: f64,
    /// Reference SNR at 1 m.
    pub gamma0_db: f64,
}

/// Minimum receiver SNR, in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrTarget {
    pub rho_bar_db: f64,
}

impl SnrTarget {
    pub fn new(rho_bar_db: f64) -> Self {
        Self { rho_bar_db }
    }
}

/// Maximum horizontal UAV-GBS distance at which the SNR target holds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct CoverageRadius(f64);

impl CoverageRadius {
    pub fn new(d_bar: f64) -> Result<Self> {
        if d_bar.is_finite() && d_bar > 0.0 {
            Ok(Self(d_bar))
        } else {
            Err(Error::InvalidScenario(format!(
                "coverage radius must be finite and positive, got {d_bar}"
            )))
        }
    }

    pub fn meters(self) -> f64 {
        self.0
    }
}

impl Scenario {
    /// Checks the instance invariants, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if self.gbs_positions.is_empty() {
            return bad("field `gbs`: at least one GBS is required".into());
        }
        for (i, g) in self.gbs_positions.iter().enumerate() {
            if !g.is_finite() {
                return bad(format!("field `gbs[{i}]`: coordinates must be finite"));
            }
        }
        self.validate_radio()
    }

    /// Checks everything except the GBS list.
    pub fn validate_radio(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidScenario(msg));
        if !self.u0.is_finite() {
            return bad("field `u0`: coordinates must be finite".into());
        }
        if !self.uf.is_finite() {
            return bad("field `uF`: coordinates must be finite".into());
        }
        for (name, v) in [
            ("H", self.uav_altitude),
            ("HG", self.gbs_altitude),
            ("vmax", self.vmax),
            ("gamma0_db", self.gamma0_db),
        ] {
            if !v.is_finite() {
                return bad(format!("field `{name}`: must be finite, got {v}"));
            }
        }
        if self.vmax <= 0.0 {
            return bad(format!("field `vmax`: must be positive, got {}", self.vmax));
        }
        if self.gbs_altitude < 0.0 {
            return bad(format!("field `HG`: must be non-negative, got {}", self.gbs_altitude));
        }
        if self.uav_altitude <= self.gbs_altitude {
            return bad(format!(
                "field `H`: UAV altitude {} must exceed GBS altitude {}",
                self.uav_altitude, self.gbs_altitude
            ));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn num_gbs(&self) -> usize {
        self.gbs_positions.len()
    }

    pub fn gamma0_linear(&self) -> f64 {
        db_to_linear(self.gamma0_db)
    }

    fn altitude_gap_sq(&self) -> f64 {
        let dh = self.uav_altitude - self.gbs_altitude;
        dh * dh
    }

    pub fn gbs(&self, index: usize) -> Point {
        self.gbs_positions[index]
    }

    /// SNR in dB at horizontal distance `r` from the serving GBS.
    pub fn snr_at_distance(&self, r: f64) -> f64 {
        linear_to_db(self.gamma0_linear() / (self.altitude_gap_sq() + r * r))
    }

    /// SNR target (dB) whose coverage radius is exactly `d_bar`.
    pub fn snr_for_radius(&self, d_bar: f64) -> f64 {
        self.snr_at_distance(d_bar)
    }

    /// The SNR available directly above a GBS, the ceiling for any target.
    pub fn overhead_snr_db(&self) -> f64 {
        self.snr_at_distance(0.0)
    }
}

/// `d_bar = sqrt(gamma0 / rho - (H - HG)^2)`, rejecting targets that leave no
/// positive radius.
pub fn compute_coverage_radius(s: &Scenario, target: SnrTarget) -> Result<CoverageRadius> {
    let ratio = s.gamma0_linear() / db_to_linear(target.rho_bar_db);
    let d_sq = ratio - s.altitude_gap_sq();
    if !target.rho_bar_db.is_finite() || !(d_sq > 0.0) {
        return Err(Error::UnattainableSnr {
            rho_db: target.rho_bar_db,
            overhead_db: s.overhead_snr_db(),
        });
    }
    CoverageRadius::new(d_sq.sqrt())
}

/// Index of the closest GBS and its horizontal distance. Ties go to the lowest
/// index.
pub fn nearest_gbs(s: &Scenario, u: Point) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, g) in s.gbs_positions.iter().enumerate() {
        let d = u.distance(*g);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// Received SNR (dB) at `u` when served by the closest GBS.
pub fn snr_at(s: &Scenario, u: Point) -> f64 {
    let (_, r) = nearest_gbs(s, u);
    s.snr_at_distance(r)
}
