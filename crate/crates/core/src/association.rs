//! GBS association sequences: the shortest-path heuristic, exhaustive
//! enumeration of every simple route, and repeat pruning.

use std::fmt;
use std::str::FromStr;

use crate::connectivity::{is_feasible, CoverageGraph};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

/// Default ceiling on the number of enumerated sequences.
pub const DEFAULT_MAX_PATHS: usize = 10_000_000;

/// Ordered GBS indices the UAV associates with, one per trajectory segment.
///
/// Indices are zero-based internally; `Display`/`FromStr` use the one-based
/// comma-separated form, e.g. `1,10,11,6,8`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(into = "String")]
pub struct AssociationSequence(Vec<usize>);

impl From<AssociationSequence> for String {
    fn from(seq: AssociationSequence) -> String {
        seq.to_string()
    }
}

impl AssociationSequence {
    /// Panics on an empty list; a route always has at least one segment.
    pub fn new(indices: Vec<usize>) -> Self {
        assert!(!indices.is_empty(), "association sequence needs at least one GBS");
        Self(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn is_distinct(&self) -> bool {
        let mut sorted = self.0.clone();
        sorted.sort_unstable();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Position of the first pair of equal consecutive entries.
    pub fn first_consecutive_repeat(&self) -> Option<usize> {
        self.0.windows(2).position(|w| w[0] == w[1])
    }

    /// Route weight in the coverage graph: `|u0 - g_I1| + sum |g_I(i+1) - g_Ii| + |uF - g_IN|`.
    /// This upper-bounds the optimized path length for the sequence.
    pub fn path_weight(&self, s: &Scenario) -> f64 {
        let g = |i: usize| s.gbs(i);
        let inner: f64 = self.0.windows(2).map(|w| g(w[0]).distance(g(w[1]))).sum();
        s.u0.distance(g(self.first())) + inner + s.uf.distance(g(self.last()))
    }

    /// Checks the connectivity conditions for radius `d_bar`: the first GBS
    /// covers `u0`, the last covers `uF`, consecutive GBSs are at most
    /// `2 d_bar` apart, and every index names a GBS. `tol` is absolute, in
    /// meters.
    pub fn check(&self, s: &Scenario, d_bar: f64, tol: f64) -> Result<()> {
        let m = s.num_gbs();
        if let Some(&bad) = self.0.iter().find(|&&i| i >= m) {
            return Err(Error::InvalidSequence(format!("GBS {} does not exist (M = {m})", bad + 1)));
        }
        let d0 = s.u0.distance(s.gbs(self.first()));
        if d0 > d_bar + tol {
            return Err(Error::InvalidSequence(format!(
                "u0 is {d0:.3} m from GBS {}, beyond {d_bar:.3} m",
                self.first() + 1
            )));
        }
        let df = s.uf.distance(s.gbs(self.last()));
        if df > d_bar + tol {
            return Err(Error::InvalidSequence(format!(
                "uF is {df:.3} m from GBS {}, beyond {d_bar:.3} m",
                self.last() + 1
            )));
        }
        for w in self.0.windows(2) {
            let d = s.gbs(w[0]).distance(s.gbs(w[1]));
            if d > 2.0 * d_bar + tol {
                return Err(Error::InvalidSequence(format!(
                    "GBS {} and {} are {d:.3} m apart, beyond 2 x {d_bar:.3} m",
                    w[0] + 1,
                    w[1] + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for AssociationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

impl FromStr for AssociationSequence {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let indices = text
            .split(',')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::InvalidSequence(format!("bad GBS index `{}`", t.trim()))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(indices))
    }
}

/// Minimum-weight `U0 -> UF` route (Dijkstra over the dense vertex set).
///
/// Ties on distance pick the lowest vertex id; ties on a relaxation keep the
/// lowest predecessor id.
pub fn shortest_path_association(g: &CoverageGraph) -> Result<AssociationSequence> {
    let n = g.num_vertices();
    let (start, end) = (g.start_id(), g.end_id());
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[start] = 0.0;
    loop {
        let cur = (0..n)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
        let Some(cur) = cur else {
            return Err(Error::Infeasible);
        };
        if cur == end {
            break;
        }
        done[cur] = true;
        for &(next, w) in g.neighbors(cur) {
            if done[next] {
                continue;
            }
            let cand = dist[cur] + w;
            if cand < dist[next] || (cand == dist[next] && cur < pred[next]) {
                dist[next] = cand;
                pred[next] = cur;
            }
        }
    }
    let mut ids = Vec::new();
    let mut v = pred[end];
    while v != start {
        ids.push(v - 1);
        v = pred[v];
    }
    ids.reverse();
    Ok(AssociationSequence(ids))
}

/// Every simple `U0 -> UF` route, in depth-first order with neighbors visited
/// by ascending index. Fails with `TooManyPaths` once more than `max_paths`
/// routes exist.
pub fn enumerate_associations(g: &CoverageGraph, max_paths: usize) -> Result<Vec<AssociationSequence>> {
    if !is_feasible(g) {
        return Err(Error::Infeasible);
    }
    let mut out = Vec::new();
    let mut visited = vec![false; g.num_vertices()];
    let mut stack = Vec::new();
    for &(first, _) in g.neighbors(g.start_id()) {
        if first == g.end_id() {
            continue;
        }
        visited[first] = true;
        stack.push(first - 1);
        extend_paths(g, first, &mut visited, &mut stack, &mut out, max_paths)?;
        stack.pop();
        visited[first] = false;
    }
    Ok(out)
}

fn extend_paths(
    g: &CoverageGraph,
    at: usize,
    visited: &mut [bool],
    stack: &mut Vec<usize>,
    out: &mut Vec<AssociationSequence>,
    max_paths: usize,
) -> Result<()> {
    let end = g.end_id();
    for &(next, _) in g.neighbors(at) {
        if next == end {
            if out.len() == max_paths {
                return Err(Error::TooManyPaths { limit: max_paths });
            }
            out.push(AssociationSequence(stack.clone()));
        } else if next != g.start_id() && !visited[next] {
            visited[next] = true;
            stack.push(next - 1);
            extend_paths(g, next, visited, stack, out, max_paths)?;
            stack.pop();
            visited[next] = false;
        }
    }
    Ok(())
}

/// Removes revisits: while some GBS appears at positions `k < q`, drop the
/// entries `k+1..=q`. The leftmost repeated GBS is shortcut first, to its last
/// occurrence.
pub fn prune_repeats(seq: &AssociationSequence) -> AssociationSequence {
    let mut v = seq.0.clone();
    let mut k = 0;
    while k < v.len() {
        if let Some(q) = v.iter().rposition(|&x| x == v[k]) {
            if q > k {
                v.drain(k + 1..=q);
            }
        }
        k += 1;
    }
    AssociationSequence(v)
}
