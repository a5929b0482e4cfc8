//! Shortest path from `u0` to `uF` inside the union of coverage disks.
//!
//! Every connected trajectory lies in that union, whatever its association
//! sequence, so this length bounds the optimum from below. The union's
//! boundary arcs all bulge outward, so a shortest path only bends at points
//! where two circles cross; Dijkstra over the visibility graph of `u0`, `uF`
//! and those crossings finds it exactly.

use crate::association::{prune_repeats, AssociationSequence};
use crate::geometry::{polyline_length, Point};
use crate::scenario::Scenario;

/// Slack, as a fraction of `d_bar`, when deciding whether a point or segment
/// is covered. It only ever enlarges the union, so the length stays a lower
/// bound; it also keeps tangent disks connected.
pub const COVER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CoveredPath {
    pub points: Vec<Point>,
    pub length: f64,
}

/// Shortest covered path, or `None` when `u0` and `uF` are not connected
/// through the union.
pub fn shortest_covered_path(s: &Scenario, d_bar: f64) -> Option<CoveredPath> {
    let tol = COVER_TOL * d_bar;
    let centers = &s.gbs_positions;
    let covered = |p: Point| centers.iter().any(|&c| p.distance(c) <= d_bar + tol);
    if !covered(s.u0) || !covered(s.uf) {
        return None;
    }
    let mut nodes = vec![s.u0, s.uf];
    for (i, &a) in centers.iter().enumerate() {
        for &b in &centers[i + 1..] {
            for p in circle_crossings(a, b, d_bar, tol) {
                // Crossings strictly inside a third disk are interior to the
                // union and can never be a bend.
                let interior = centers.iter().any(|&c| p.distance(c) < d_bar - tol);
                if !interior {
                    nodes.push(p);
                }
            }
        }
    }

    // Dense Dijkstra; edges are tested lazily.
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[0] = 0.0;
    loop {
        let u = (0..n).filter(|&v| !done[v]).min_by(|&a, &b| dist[a].total_cmp(&dist[b]))?;
        if dist[u].is_infinite() {
            return None;
        }
        if u == 1 {
            break;
        }
        done[u] = true;
        for v in 0..n {
            if done[v] {
                continue;
            }
            let alt = dist[u] + nodes[u].distance(nodes[v]);
            if alt < dist[v] && segment_covered(nodes[u], nodes[v], centers, d_bar + tol) {
                dist[v] = alt;
                prev[v] = u;
            }
        }
    }
    let mut points = vec![nodes[1]];
    let mut v = 1;
    while v != 0 {
        v = prev[v];
        points.push(nodes[v]);
    }
    points.reverse();
    let length = polyline_length(&points);
    Some(CoveredPath { points, length })
}

/// Points where two circles of radius `r` around `a` and `b` cross; a single
/// point when they touch (within `tol`), none when they are disjoint or equal.
fn circle_crossings(a: Point, b: Point, r: f64, tol: f64) -> Vec<Point> {
    let d = a.distance(b);
    if d == 0.0 || d > 2.0 * r + tol {
        return Vec::new();
    }
    let mid = a.lerp(b, 0.5);
    let h = (r * r - 0.25 * d * d).max(0.0).sqrt();
    if h <= tol {
        return vec![mid];
    }
    let off = (b - a).perp() * (h / d);
    vec![mid + off, mid - off]
}

/// Parameter interval of the segment `p + t (q - p)`, `t` in [0, 1], inside
/// the disk `(c, r)`.
fn disk_interval(p: Point, q: Point, c: Point, r: f64) -> Option<(f64, f64)> {
    let d = q - p;
    let f = p - c;
    let a = d.norm_sq();
    if a == 0.0 {
        return (f.norm() <= r).then_some((0.0, 1.0));
    }
    let b = f.dot(d);
    let disc = b * b - a * (f.norm_sq() - r * r);
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let t0 = ((-b - root) / a).max(0.0);
    let t1 = ((-b + root) / a).min(1.0);
    (t0 <= t1).then_some((t0, t1))
}

fn segment_covered(p: Point, q: Point, centers: &[Point], r: f64) -> bool {
    let mut spans: Vec<(f64, f64)> = centers.iter().filter_map(|&c| disk_interval(p, q, c, r)).collect();
    spans.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut reach = 0.0;
    for (t0, t1) in spans {
        if t0 > reach + 1e-12 {
            return false;
        }
        reach = f64::max(reach, t1);
        if reach >= 1.0 {
            return true;
        }
    }
    false
}

/// Association sequence that flies `path`: at each point, switch to the
/// covering GBS that keeps coverage furthest along the path. Repeats are
/// pruned. `None` if some stretch of the path is uncovered.
pub fn covering_sequence(s: &Scenario, path: &[Point], d_bar: f64) -> Option<AssociationSequence> {
    let r = d_bar * (1.0 + COVER_TOL);
    // Arc-length offset of each vertex.
    let mut offset = vec![0.0];
    for w in path.windows(2) {
        offset.push(offset[offset.len() - 1] + w[0].distance(w[1]));
    }
    let total = offset[offset.len() - 1];
    // Covered arc-length spans of every GBS, merged across segments.
    let spans: Vec<Vec<(f64, f64)>> = s
        .gbs_positions
        .iter()
        .map(|&c| {
            let mut out: Vec<(f64, f64)> = Vec::new();
            for (k, w) in path.windows(2).enumerate() {
                let len = offset[k + 1] - offset[k];
                let iv = if len == 0.0 {
                    (w[0].distance(c) <= r).then_some((0.0, 0.0))
                } else {
                    disk_interval(w[0], w[1], c, r)
                };
                if let Some((t0, t1)) = iv {
                    let (a, b) = (offset[k] + t0 * len, offset[k] + t1 * len);
                    match out.last_mut() {
                        Some(last) if a <= last.1 + 1e-9 * d_bar => last.1 = last.1.max(b),
                        _ => out.push((a, b)),
                    }
                }
            }
            if path.len() == 1 && path[0].distance(c) <= r {
                out.push((0.0, 0.0));
            }
            out
        })
        .collect();
    let slack = 1e-9 * d_bar;
    let mut seq = Vec::new();
    let mut pos = 0.0;
    loop {
        let (g, reach) = spans
            .iter()
            .enumerate()
            .filter_map(|(g, sp)| sp.iter().find(|&&(a, b)| a <= pos + slack && pos <= b + slack).map(|&(_, b)| (g, b)))
            .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)))?;
        seq.push(g);
        if reach >= total - slack {
            break;
        }
        if reach <= pos {
            return None;
        }
        pos = reach;
    }
    Some(prune_repeats(&AssociationSequence::new(seq)))
}
