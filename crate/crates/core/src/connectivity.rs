//! Coverage graph over `{U0, G1..GM, UF}` and the feasibility questions it
//! answers.
//!
//! `U0`/`UF` connect to every GBS within `d_bar` of them, and two GBSs connect
//! when their coverage disks touch (`distance <= 2 d_bar`). A connected
//! trajectory exists exactly when `U0` and `UF` share a component.

use std::collections::VecDeque;
use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scenario::{CoverageRadius, Scenario};

/// A graph vertex. GBS indices are zero-based; they print one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Start,
    Gbs(usize),
    End,
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Start => f.write_str("U0"),
            Vertex::Gbs(m) => write!(f, "G{}", m + 1),
            Vertex::End => f.write_str("UF"),
        }
    }
}

/// Undirected weighted coverage graph. Vertex ids are dense: `0` is `U0`,
/// `1..=M` are the GBSs and `M + 1` is `UF`.
#[derive(Debug, Clone)]
pub struct CoverageGraph {
    num_gbs: usize,
    d_bar: f64,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl CoverageGraph {
    pub fn num_gbs(&self) -> usize {
        self.num_gbs
    }

    pub fn num_vertices(&self) -> usize {
        self.num_gbs + 2
    }

    pub fn d_bar(&self) -> f64 {
        self.d_bar
    }

    pub fn start_id(&self) -> usize {
        0
    }

    pub fn end_id(&self) -> usize {
        self.num_gbs + 1
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        match id {
            0 => Vertex::Start,
            i if i == self.end_id() => Vertex::End,
            i => Vertex::Gbs(i - 1),
        }
    }

    pub fn id(&self, v: Vertex) -> usize {
        match v {
            Vertex::Start => 0,
            Vertex::Gbs(m) => m + 1,
            Vertex::End => self.end_id(),
        }
    }

    /// Neighbors of `id` with edge weights, in ascending id order.
    pub fn neighbors(&self, id: usize) -> &[(usize, f64)] {
        &self.adjacency[id]
    }

    pub fn edge_weight(&self, a: Vertex, b: Vertex) -> Option<f64> {
        let (ia, ib) = (self.id(a), self.id(b));
        self.adjacency[ia]
            .binary_search_by_key(&ib, |&(n, _)| n)
            .ok()
            .map(|k| self.adjacency[ia][k].1)
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edge_weight(a, b).is_some()
    }

    /// Every edge once, as `(lower id, higher id, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(move |(a, adj)| {
            adj.iter()
                .filter(move |&&(b, _)| b > a)
                .map(move |&(b, w)| (self.vertex(a), self.vertex(b), w))
        })
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edge list as CSV with header `v1,v2,weight_m`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("v1,v2,weight_m\n");
        for (a, b, w) in self.edges() {
            writeln!(out, "{a},{b},{w:.6}").unwrap();
        }
        out
    }
}

/// Builds the coverage graph for radius `d_bar`. Boundary distances count as
/// edges.
pub fn build_graph(s: &Scenario, d_bar: CoverageRadius) -> Result<CoverageGraph> {
    let m = s.num_gbs();
    if m == 0 {
        return Err(Error::InvalidScenario("field `gbs`: at least one GBS is required".into()));
    }
    let r = d_bar.meters();
    let end = m + 1;
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m + 2];
    let mut link = |a: usize, b: usize, w: f64| {
        adjacency[a].push((b, w));
        adjacency[b].push((a, w));
    };
    for (i, g) in s.gbs_positions.iter().enumerate() {
        let w = s.u0.distance(*g);
        if w <= r {
            link(0, i + 1, w);
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let w = s.gbs_positions[i].distance(s.gbs_positions[j]);
            if w <= 2.0 * r {
                link(i + 1, j + 1, w);
            }
        }
    }
    for (i, g) in s.gbs_positions.iter().enumerate() {
        let w = s.uf.distance(*g);
        if w <= r {
            link(i + 1, end, w);
        }
    }
    for adj in &mut adjacency {
        adj.sort_by_key(|&(n, _)| n);
    }
    Ok(CoverageGraph { num_gbs: m, d_bar: r, adjacency })
}

/// Breadth-first reachability of `UF` from `U0`.
pub fn is_feasible(g: &CoverageGraph) -> bool {
    let mut seen = vec![false; g.num_vertices()];
    let mut queue = VecDeque::from([g.start_id()]);
    seen[g.start_id()] = true;
    while let Some(v) = queue.pop_front() {
        if v == g.end_id() {
            return true;
        }
        for &(n, _) in g.neighbors(v) {
            if !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    false
}

/// The largest feasible SNR target and the coverage radius it corresponds to.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxAttainableSnr {
    pub rho_max_db: f64,
    /// Smallest coverage radius at which `U0` and `UF` are connected.
    pub critical_d_bar: f64,
    /// GBS indices (zero-based) along the bottleneck path.
    pub bottleneck_path: Vec<usize>,
}

/// Required coverage radius for the hop `a -> b` of a route: endpoint hops
/// need the full distance, GBS-to-GBS hops half of it.
fn hop_requirement(s: &Scenario, a: usize, b: usize, end: usize) -> f64 {
    let point = |v: usize| -> Point {
        if v == 0 {
            s.u0
        } else if v == end {
            s.uf
        } else {
            s.gbs_positions[v - 1]
        }
    };
    let d = point(a).distance(point(b));
    let a_is_gbs = a != 0 && a != end;
    let b_is_gbs = b != 0 && b != end;
    if a_is_gbs && b_is_gbs {
        d / 2.0
    } else {
        d
    }
}

/// Exact maximum attainable SNR target, found as a minimax (bottleneck) path
/// from `U0` to `UF` over the complete coverage graph.
pub fn max_attainable_snr(s: &Scenario) -> Result<MaxAttainableSnr> {
    let m = s.num_gbs();
    if m == 0 {
        return Err(Error::Unreachable);
    }
    let n = m + 2;
    let end = m + 1;
    let mut label = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    label[0] = 0.0;
    loop {
        let mut cur = usize::MAX;
        for v in 0..n {
            if !done[v] && label[v].is_finite() && (cur == usize::MAX || label[v] < label[cur]) {
                cur = v;
            }
        }
        if cur == usize::MAX {
            return Err(Error::Unreachable);
        }
        if cur == end {
            break;
        }
        done[cur] = true;
        for next in 1..n {
            // No direct U0-UF hop.
            if done[next] || next == cur || (cur == 0 && next == end) {
                continue;
            }
            let cand = label[cur].max(hop_requirement(s, cur, next, end));
            if cand < label[next] {
                label[next] = cand;
                pred[next] = cur;
            }
        }
    }
    let critical = label[end];
    let mut path = Vec::new();
    let mut v = pred[end];
    while v != 0 {
        path.push(v - 1);
        v = pred[v];
    }
    path.reverse();
    Ok(MaxAttainableSnr {
        rho_max_db: s.snr_for_radius(critical),
        critical_d_bar: critical,
        bottleneck_path: path,
    })
}
