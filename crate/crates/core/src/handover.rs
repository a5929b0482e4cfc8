//! Handover placement for a fixed association sequence.
//!
//! With the sequence fixed, the shortest connected route is a convex problem:
//! minimize the polyline length `u0 -> u1 -> ... -> u(N-1) -> uF` where each
//! handover point `ui` must lie in the lens where the coverage disks of its two
//! consecutive GBSs overlap. It is solved by projected gradient descent on a
//! smoothed length, `sum sqrt(|ui - u(i-1)|^2 + eps^2)`, with a decreasing
//! `eps` schedule, Nesterov momentum with restarts, and backtracking steps.
//! Projection onto a lens is closed form.

use serde::{Deserialize, Serialize};

use crate::association::AssociationSequence;
use crate::error::{Error, Result};
use crate::geometry::{polyline_length, Disk, Point};
use crate::scenario::Scenario;

/// Intersection of two equal-radius coverage disks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoverRegion {
    pub center_a: Point,
    pub center_b: Point,
    pub radius: f64,
}

impl HandoverRegion {
    pub fn new(center_a: Point, center_b: Point, radius: f64) -> Self {
        Self { center_a, center_b, radius }
    }

    pub fn is_empty(&self) -> bool {
        self.center_a.distance(self.center_b) > 2.0 * self.radius
    }

    pub fn contains(&self, p: Point, tol: f64) -> bool {
        p.distance(self.center_a) <= self.radius + tol && p.distance(self.center_b) <= self.radius + tol
    }

    /// The two points where the disk boundaries cross (equal when the disks
    /// touch).
    pub fn corners(&self) -> [Point; 2] {
        let axis = self.center_b - self.center_a;
        let d = axis.norm();
        let mid = self.center_a.lerp(self.center_b, 0.5);
        if d == 0.0 {
            return [mid, mid];
        }
        let half = 0.5 * d;
        let w = (self.radius * self.radius - half * half).max(0.0).sqrt();
        let n = axis.perp() * (1.0 / d);
        [mid + n * w, mid - n * w]
    }

    /// Euclidean projection of `p` onto the lens.
    pub fn project(&self, p: Point) -> Point {
        let a = Disk::new(self.center_a, self.radius);
        let b = Disk::new(self.center_b, self.radius);
        let slack = 1e-12 * self.radius;
        let in_a = a.contains(p, 0.0);
        let in_b = b.contains(p, 0.0);
        if in_a && in_b {
            return p;
        }
        if self.center_a == self.center_b {
            return a.project(p);
        }
        let mut best: Option<Point> = None;
        let mut consider = |q: Point| {
            if best.is_none_or(|bq| q.distance(p) < bq.distance(p)) {
                best = Some(q);
            }
        };
        if !in_a {
            let q = a.project(p);
            if b.contains(q, slack) {
                consider(q);
            }
        }
        if !in_b {
            let q = b.project(p);
            if a.contains(q, slack) {
                consider(q);
            }
        }
        if let Some(q) = best {
            return q;
        }
        let [c1, c2] = self.corners();
        if c1.distance(p) <= c2.distance(p) {
            c1
        } else {
            c2
        }
    }
}

/// Optimized (or constructed) handover points for one association sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandoverSolution {
    /// `[u0, u1, ..., u(N-1), uF]`.
    pub points: Vec<Point>,
    /// Total polyline length, meters.
    pub objective: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl HandoverSolution {
    fn from_points(points: Vec<Point>, converged: bool, iterations: usize) -> Self {
        let objective = polyline_length(&points);
        Self { points, objective, converged, iterations }
    }
}

/// Knobs for [`optimize_handovers`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Smoothing levels as multiples of the coverage radius, strictly
    /// decreasing; the last must be at most `1e-6`.
    pub eps_schedule: Vec<f64>,
    /// Iteration cap per smoothing level.
    pub max_iterations: usize,
    /// Backtracking shrink factor in `(0, 1)`.
    pub backtrack: f64,
    /// Step growth attempted after every accepted step, `>= 1`.
    pub step_growth: f64,
    /// Feasibility tolerance as a multiple of the coverage radius.
    pub constraint_tol: f64,
    /// A level ends when one plain step lowers the objective by less than
    /// this fraction.
    pub objective_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps_schedule: vec![1e-2, 1e-4, 1e-6, 1e-8, 1e-10],
            max_iterations: 5000,
            backtrack: 0.5,
            step_growth: 2.0,
            constraint_tol: 1e-6,
            objective_tol: 1e-13,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("solver config: {m}")));
        if self.eps_schedule.is_empty() {
            return bad("eps schedule is empty");
        }
        if self.eps_schedule.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return bad("eps values must be positive and finite");
        }
        if self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return bad("eps schedule must be strictly decreasing");
        }
        if *self.eps_schedule.last().unwrap() > 1e-6 {
            return bad("final eps must be at most 1e-6 x d_bar");
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive");
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return bad("backtrack must lie in (0, 1)");
        }
        if !(self.step_growth >= 1.0) {
            return bad("step_growth must be >= 1");
        }
        if !(self.constraint_tol > 0.0) || !(self.objective_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        Ok(())
    }
}

fn check_sequence(s: &Scenario, seq: &AssociationSequence) -> Result<()> {
    if let Some(&bad) = seq.indices().iter().find(|&&i| i >= s.num_gbs()) {
        return Err(Error::InvalidSequence(format!("GBS {} does not exist", bad + 1)));
    }
    if let Some(k) = seq.first_consecutive_repeat() {
        return Err(Error::DegenerateSequence { position: k + 1, gbs: seq.indices()[k] + 1 });
    }
    Ok(())
}

/// The lenses each handover point is confined to, in sequence order.
pub fn handover_regions(s: &Scenario, seq: &AssociationSequence, d_bar: f64) -> Vec<HandoverRegion> {
    seq.indices()
        .windows(2)
        .map(|w| HandoverRegion::new(s.gbs(w[0]), s.gbs(w[1]), d_bar))
        .collect()
}

/// Closed-form feasible handover points: each `ui` sits on the segment between
/// its two GBSs, `d_bar` away from the one the UAV is leaving.
pub fn feasible_handover_points(s: &Scenario, seq: &AssociationSequence, d_bar: f64) -> Result<HandoverSolution> {
    check_sequence(s, seq)?;
    let idx = seq.indices();
    let mut points = Vec::with_capacity(idx.len() + 1);
    points.push(s.u0);
    for w in idx.windows(2) {
        let (ga, gb) = (s.gbs(w[0]), s.gbs(w[1]));
        let axis = gb - ga;
        let len = axis.norm();
        if len == 0.0 {
            points.push(ga);
        } else {
            // Clamp keeps the point on the segment if the GBSs sit closer than d_bar.
            points.push(ga + axis * (d_bar.min(len) / len));
        }
    }
    points.push(s.uf);
    Ok(HandoverSolution::from_points(points, true, 0))
}

/// Smoothed length and its gradient with respect to the interior points.
struct Smoothed<'a> {
    start: Point,
    end: Point,
    regions: &'a [HandoverRegion],
    eps_sq: f64,
}

impl Smoothed<'_> {
    fn point(&self, x: &[Point], i: usize) -> Point {
        if i == 0 {
            self.start
        } else if i == x.len() + 1 {
            self.end
        } else {
            x[i - 1]
        }
    }

    fn value(&self, x: &[Point]) -> f64 {
        (1..=x.len() + 1)
            .map(|i| ((self.point(x, i) - self.point(x, i - 1)).norm_sq() + self.eps_sq).sqrt())
            .sum()
    }

    fn gradient(&self, x: &[Point], grad: &mut [Point]) {
        let n = x.len();
        let unit = |i: usize| {
            let v = self.point(x, i) - self.point(x, i - 1);
            v * (1.0 / (v.norm_sq() + self.eps_sq).sqrt())
        };
        let mut prev = unit(1);
        for k in 0..n {
            let next = unit(k + 2);
            grad[k] = prev - next;
            prev = next;
        }
    }

    /// Inverse of each point's curvature bound `1/s_i + 1/s_(i+1)`.
    fn curvature_scale(&self, x: &[Point], out: &mut [f64]) {
        let len = |i: usize| ((self.point(x, i) - self.point(x, i - 1)).norm_sq() + self.eps_sq).sqrt();
        let mut prev = len(1);
        for k in 0..x.len() {
            let next = len(k + 2);
            out[k] = 1.0 / (1.0 / prev + 1.0 / next);
            prev = next;
        }
    }

    fn project(&self, x: &mut [Point]) {
        for (p, r) in x.iter_mut().zip(self.regions) {
            *p = r.project(*p);
        }
    }
}

/// One smoothing level. Returns `(iterations, hit_tolerance)`.
///
/// Each point moves along its own gradient scaled by the inverse curvature of
/// its two adjacent segments; the lens constraints are separable per point,
/// so the per-point scaling keeps the projection Euclidean.
fn minimize_level(f: &Smoothed<'_>, x: &mut Vec<Point>, step: &mut f64, cfg: &SolverConfig) -> (usize, bool) {
    let n = x.len();
    let mut grad = vec![Point::ORIGIN; n];
    let mut scale = vec![0.0; n];
    let mut y = x.clone();
    let mut trial = vec![Point::ORIGIN; n];
    let mut fx = f.value(x);
    let mut theta = 1.0f64;
    for iter in 1..=cfg.max_iterations {
        let momentum = theta > 1.0;
        f.gradient(&y, &mut grad);
        f.curvature_scale(&y, &mut scale);
        let fy = f.value(&y);
        let mut t = *step;
        let mut ft;
        loop {
            for k in 0..n {
                trial[k] = y[k] - grad[k] * (t * scale[k]);
            }
            f.project(&mut trial);
            ft = f.value(&trial);
            let mut model = fy;
            for k in 0..n {
                let d = trial[k] - y[k];
                model += grad[k].dot(d) + d.norm_sq() / (2.0 * t * scale[k]);
            }
            if ft <= model + 1e-15 * fy.abs() || t < 1e-12 {
                break;
            }
            t *= cfg.backtrack;
        }
        *step = (t * cfg.step_growth).min(1.0);
        if ft > fx {
            // Momentum overshot: restart from the last accepted iterate.
            theta = 1.0;
            y.clone_from(x);
            if !momentum {
                return (iter, true);
            }
            continue;
        }
        let decrease = fx - ft;
        let next_theta = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / next_theta;
        for k in 0..n {
            y[k] = trial[k] + (trial[k] - x[k]) * beta;
        }
        f.project(&mut y);
        x.clone_from(&trial);
        fx = ft;
        theta = next_theta;
        if decrease <= cfg.objective_tol * fx {
            if !momentum {
                return (iter, true);
            }
            // Confirm with a plain step before stopping.
            theta = 1.0;
            y.clone_from(x);
        }
    }
    (cfg.max_iterations, false)
}

/// Near-optimal handover points for a fixed association sequence.
///
/// Starts from [`feasible_handover_points`] and never returns anything longer.
/// `converged` is false when some smoothing level ran out of iterations; the
/// best iterate found is still returned.
pub fn optimize_handovers(
    s: &Scenario,
    seq: &AssociationSequence,
    d_bar: f64,
    cfg: &SolverConfig,
) -> Result<HandoverSolution> {
    cfg.validate()?;
    let initial = feasible_handover_points(s, seq, d_bar)?;
    if seq.len() == 1 {
        return Ok(initial);
    }
    let regions = handover_regions(s, seq, d_bar);
    let mut x: Vec<Point> = initial.points[1..initial.points.len() - 1].to_vec();
    let mut best = initial;
    let mut step = 1.0;
    let mut iterations = 0;
    let mut converged = true;
    for &rel in &cfg.eps_schedule {
        let eps = rel * d_bar;
        let f = Smoothed { start: s.u0, end: s.uf, regions: &regions, eps_sq: eps * eps };
        let (iters, ok) = minimize_level(&f, &mut x, &mut step, cfg);
        iterations += iters;
        converged &= ok;
        let mut points = Vec::with_capacity(x.len() + 2);
        points.push(s.u0);
        points.extend_from_slice(&x);
        points.push(s.uf);
        let objective = polyline_length(&points);
        if objective < best.objective {
            best.points = points;
            best.objective = objective;
        }
    }
    best.converged = converged;
    best.iterations = iterations;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scenario(gbs: &[(f64, f64)], u0: (f64, f64), uf: (f64, f64)) -> Scenario {
        Scenario {
            gbs_positions: gbs.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            u0: Point::new(u0.0, u0.1),
            uf: Point::new(uf.0, uf.1),
            uav_altitude: 90.0,
            gbs_altitude: 12.5,
            vmax: 50.0,
            gamma0_db: 80.0,
        }
    }

    fn seq(v: &[usize]) -> AssociationSequence {
        AssociationSequence::new(v.to_vec())
    }

    #[test]
    fn lens_projection_cases() {
        let r = HandoverRegion::new(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 1.0);
        let inside = Point::new(0.5, 0.2);
        assert_eq!(r.project(inside), inside);
        // Left of both disks: lands on the right disk boundary, which is inside the left disk.
        let p = r.project(Point::new(-3.0, 0.0));
        assert!((p.x - 0.0).abs() < 1e-12 && p.y.abs() < 1e-12, "{p:?}");
        // Straight up: the projection is the upper corner.
        let top = r.project(Point::new(0.5, 5.0));
        let h = (1.0f64 - 0.25).sqrt();
        assert!((top.x - 0.5).abs() < 1e-12 && (top.y - h).abs() < 1e-12, "{top:?}");
        assert!(r.contains(top, 1e-12));
    }

    #[test]
    fn touching_disks_collapse_to_midpoint() {
        let r = HandoverRegion::new(Point::new(0.0, 0.0), Point::new(2.0, 0.0), 1.0);
        assert!(!r.is_empty());
        for p in [Point::new(5.0, 5.0), Point::new(-4.0, 1.0), Point::new(1.0, -3.0)] {
            let q = r.project(p);
            assert!(q.distance(Point::new(1.0, 0.0)) < 1e-12, "{q:?}");
        }
    }

    /// Brute-force projection: nearest of a dense boundary-and-interior sample.
    fn brute_project(r: &HandoverRegion, p: Point) -> Point {
        if r.contains(p, 0.0) {
            return p;
        }
        let mut best = r.corners()[0];
        let n = 20_000;
        for disk in [(r.center_a, r.center_b), (r.center_b, r.center_a)] {
            for k in 0..n {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                let q = disk.0 + Point::new(a.cos(), a.sin()) * r.radius;
                if q.distance(disk.1) <= r.radius && q.distance(p) < best.distance(p) {
                    best = q;
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn projection_matches_boundary_sampling(
            bx in -1.9..1.9f64, by in -1.0..1.0f64,
            px in -4.0..4.0f64, py in -4.0..4.0f64,
        ) {
            let b = Point::new(bx, by);
            prop_assume!(b.norm() <= 2.0);
            let r = HandoverRegion::new(Point::ORIGIN, b, 1.0);
            let p = Point::new(px, py);
            let q = r.project(p);
            prop_assert!(r.contains(q, 1e-9));
            let bq = brute_project(&r, p);
            prop_assert!(q.distance(p) <= bq.distance(p) + 1e-9);
            prop_assert!(q.distance(bq) < 1e-3, "{:?} vs {:?}", q, bq);
        }
    }

    #[test]
    fn feasible_points_single_segment() {
        let s = scenario(&[(0.0, 0.0)], (-3.0, 0.0), (0.0, 4.0));
        let sol = feasible_handover_points(&s, &seq(&[0]), 10.0).unwrap();
        assert_eq!(sol.points, vec![s.u0, s.uf]);
        assert_eq!(sol.objective, 5.0);
    }

    #[test]
    fn feasible_point_on_axis() {
        let d = 700.0;
        let s = scenario(&[(0.0, 0.0), (2.0 * d, 0.0)], (-d, 0.0), (3.0 * d, 0.0));
        let sol = feasible_handover_points(&s, &seq(&[0, 1]), d).unwrap();
        assert_eq!(sol.points[1], Point::new(d, 0.0));
    }

    #[test]
    fn degenerate_sequence_rejected() {
        let s = scenario(&[(0.0, 0.0), (10.0, 0.0)], (0.0, 0.0), (10.0, 0.0));
        let cfg = SolverConfig::default();
        assert!(matches!(
            optimize_handovers(&s, &seq(&[0, 1, 1]), 10.0, &cfg),
            Err(Error::DegenerateSequence { position: 2, gbs: 2 })
        ));
        assert!(matches!(
            feasible_handover_points(&s, &seq(&[0, 0]), 10.0),
            Err(Error::DegenerateSequence { .. })
        ));
    }

    #[test]
    fn single_segment_needs_no_iterations() {
        let s = scenario(&[(0.0, 0.0)], (-3.0, 0.0), (0.0, 4.0));
        let sol = optimize_handovers(&s, &seq(&[0]), 10.0, &SolverConfig::default()).unwrap();
        assert_eq!(sol.objective, 5.0);
        assert_eq!(sol.iterations, 0);
        assert!(sol.converged);
    }

    #[test]
    fn straight_line_through_lens() {
        let d = 1000.0;
        let s = scenario(&[(0.0, 0.5 * d), (1.5 * d, 0.5 * d)], (0.0, 0.0), (2.0 * d, 0.0));
        let sol = optimize_handovers(&s, &seq(&[0, 1]), d, &SolverConfig::default()).unwrap();
        assert!((sol.objective - 2.0 * d).abs() < 1e-6 * d, "{}", sol.objective);
        assert!(sol.points[1].y.abs() < 1e-3 * d);
    }

    #[test]
    fn touching_lens_forces_detour() {
        let d = 1000.0;
        let s = scenario(&[(0.0, 0.5 * d), (2.0 * d, 0.5 * d)], (0.0, 0.0), (2.0 * d, 0.0));
        let sol = optimize_handovers(&s, &seq(&[0, 1]), d, &SolverConfig::default()).unwrap();
        let expected = 2.0 * (1.0f64 + 0.25).sqrt() * d;
        assert!((sol.objective - expected).abs() < 1e-6 * d, "{}", sol.objective);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let mut c = SolverConfig::default();
        c.eps_schedule = vec![1e-4, 1e-2];
        assert!(c.validate().is_err());
        c.eps_schedule = vec![1e-2, 1e-4];
        assert!(c.validate().is_err());
        c.eps_schedule = vec![1e-2, 0.0];
        assert!(c.validate().is_err());
    }
}
