//! End-to-end planners: the shortest-path heuristic, the exhaustive optimum,
//! and the straight-flight baseline.

use std::cmp::Ordering as CmpOrdering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::association::{enumerate_associations, shortest_path_association, AssociationSequence};
use crate::connectivity::{build_graph, is_feasible, CoverageGraph};
use crate::error::{Error, Result};
use crate::geodesic::{covering_sequence, shortest_covered_path};
use crate::handover::{optimize_handovers, HandoverSolution, SolverConfig};
use crate::parallel::{map_ordered, Execution};
use crate::scenario::{compute_coverage_radius, CoverageRadius, Scenario, SnrTarget};
use crate::trajectory::{build_trajectory, straight_flight, straight_flight_threshold, Trajectory};

/// Branch-and-bound keeps any partial route whose bound is within this
/// fraction of `d_bar` of the incumbent, which absorbs solver error.
pub const BOUND_MARGIN: f64 = 1e-6;

/// A different sequence replaces the shortest-path one only if it is shorter
/// by more than this fraction of `d_bar`, so rounding noise between equally
/// long routes never makes the optimum look worse than the heuristic.
pub const TIE_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Proposed,
    Optimal,
    Straight,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Proposed => "proposed",
            Method::Optimal => "optimal",
            Method::Straight => "straight",
        })
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "proposed" => Ok(Method::Proposed),
            "optimal" => Ok(Method::Optimal),
            "straight" => Ok(Method::Straight),
            other => Err(format!("unknown method `{other}` (expected proposed, optimal or straight)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanStatus {
    Feasible,
    Infeasible,
}

/// How the optimal planner searches the association sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimalSearch {
    /// Best-first over route prefixes, cutting any prefix whose optimized
    /// length (with a straight finish to `uF`) already exceeds the best
    /// complete route; extending a prefix never shortens that bound. Stops
    /// early once the best route matches the shortest path through the
    /// union of coverage disks, which no route can beat.
    #[default]
    BranchAndBound,
    /// Enumerate every simple route, then solve each one.
    Exhaustive,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlanResult {
    pub status: PlanStatus,
    pub method: Method,
    pub d_bar: f64,
    pub sequence: Option<AssociationSequence>,
    pub handovers: Option<HandoverSolution>,
    /// Holds at `u0` when infeasible.
    pub trajectory: Trajectory,
    /// Seconds; infinite when infeasible.
    pub total_time: f64,
    /// Meters; infinite when infeasible.
    pub path_length: f64,
    /// Handover problems solved to produce this result.
    pub sequences_evaluated: usize,
    #[serde(skip)]
    pub solve_wall_time: Duration,
}

impl PlanResult {
    pub fn is_feasible(&self) -> bool {
        self.status == PlanStatus::Feasible
    }

    fn infeasible(s: &Scenario, method: Method, d_bar: f64, started: Instant) -> Self {
        PlanResult {
            status: PlanStatus::Infeasible,
            method,
            d_bar,
            sequence: None,
            handovers: None,
            trajectory: Trajectory::hold(s.u0, s.vmax),
            total_time: f64::INFINITY,
            path_length: f64::INFINITY,
            sequences_evaluated: 0,
            solve_wall_time: started.elapsed(),
        }
    }
}

/// Planning context for one scenario and coverage radius. Handover solutions
/// are cached by sequence, so the heuristic and the optimal planner never
/// solve the same sequence twice.
pub struct Planner<'a> {
    scenario: &'a Scenario,
    d_bar: CoverageRadius,
    graph: CoverageGraph,
    solver: SolverConfig,
    exec: Execution,
    cache: Mutex<HashMap<AssociationSequence, HandoverSolution>>,
}

impl<'a> Planner<'a> {
    pub fn new(scenario: &'a Scenario, d_bar: CoverageRadius, solver: SolverConfig) -> Result<Self> {
        scenario.validate()?;
        solver.validate()?;
        let graph = build_graph(scenario, d_bar)?;
        Ok(Self { scenario, d_bar, graph, solver, exec: Execution::default(), cache: Mutex::default() })
    }

    /// Planner for an SNR target rather than a radius.
    pub fn for_target(scenario: &'a Scenario, target: SnrTarget, solver: SolverConfig) -> Result<Self> {
        let d_bar = compute_coverage_radius(scenario, target)?;
        Self::new(scenario, d_bar, solver)
    }

    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn graph(&self) -> &CoverageGraph {
        &self.graph
    }

    pub fn d_bar(&self) -> f64 {
        self.d_bar.meters()
    }

    pub fn is_feasible(&self) -> bool {
        is_feasible(&self.graph)
    }

    /// Optimized handover points for `seq`, memoized.
    pub fn solve(&self, seq: &AssociationSequence) -> Result<HandoverSolution> {
        if let Some(hit) = self.cache.lock().unwrap().get(seq) {
            return Ok(hit.clone());
        }
        let sol = optimize_handovers(self.scenario, seq, self.d_bar(), &self.solver)?;
        self.cache.lock().unwrap().insert(seq.clone(), sol.clone());
        Ok(sol)
    }

    fn finish(
        &self,
        method: Method,
        seq: AssociationSequence,
        sol: HandoverSolution,
        evaluated: usize,
        started: Instant,
    ) -> Result<PlanResult> {
        let trajectory = build_trajectory(&sol, &seq, self.scenario.vmax)?;
        Ok(PlanResult {
            status: PlanStatus::Feasible,
            method,
            d_bar: self.d_bar(),
            total_time: trajectory.total_time,
            path_length: sol.objective,
            sequence: Some(seq),
            handovers: Some(sol),
            trajectory,
            sequences_evaluated: evaluated,
            solve_wall_time: started.elapsed(),
        })
    }

    /// Feasibility check, shortest-path association, handover optimization,
    /// trajectory reconstruction.
    pub fn proposed(&self) -> Result<PlanResult> {
        let started = Instant::now();
        if !self.is_feasible() {
            return Ok(PlanResult::infeasible(self.scenario, Method::Proposed, self.d_bar(), started));
        }
        let seq = shortest_path_association(&self.graph)?;
        let sol = self.solve(&seq)?;
        self.finish(Method::Proposed, seq, sol, 1, started)
    }

    /// Minimum-time trajectory over every simple association sequence.
    pub fn optimal(&self, max_paths: usize, search: OptimalSearch) -> Result<PlanResult> {
        let started = Instant::now();
        if !self.is_feasible() {
            return Ok(PlanResult::infeasible(self.scenario, Method::Optimal, self.d_bar(), started));
        }
        let (seq, sol, evaluated) = match search {
            OptimalSearch::Exhaustive => self.exhaustive(max_paths)?,
            OptimalSearch::BranchAndBound => self.branch_and_bound(max_paths)?,
        };
        self.finish(Method::Optimal, seq, sol, evaluated, started)
    }

    fn exhaustive(&self, max_paths: usize) -> Result<(AssociationSequence, HandoverSolution, usize)> {
        let all = enumerate_associations(&self.graph, max_paths)?;
        let solved = map_ordered(&all, self.exec, |seq| self.solve(seq));
        let seed_seq = shortest_path_association(&self.graph)?;
        let mut best = (seed_seq.clone(), self.solve(&seed_seq)?);
        let tie = TIE_MARGIN * self.d_bar();
        for (seq, sol) in all.iter().zip(solved) {
            let sol = sol?;
            if sol.objective < best.1.objective - tie {
                best = (seq.clone(), sol);
            }
        }
        Ok((best.0, best.1, all.len()))
    }

    fn branch_and_bound(&self, max_paths: usize) -> Result<(AssociationSequence, HandoverSolution, usize)> {
        self.best_first(max_paths, true)
    }

    fn best_first(&self, max_paths: usize, use_floor: bool) -> Result<(AssociationSequence, HandoverSolution, usize)> {
        let graph = &self.graph;
        let seed_seq = shortest_path_association(graph)?;
        let seed = self.solve(&seed_seq)?;
        let mut best = (seed_seq, seed);
        let margin = BOUND_MARGIN * self.d_bar();
        let tie = TIE_MARGIN * self.d_bar();
        let mut evaluated = 1;
        // No route beats the shortest path through the union of disks, and
        // that path usually comes with a sequence that attains it.
        let covered = if use_floor { shortest_covered_path(self.scenario, self.d_bar()) } else { None };
        let floor = match covered {
            Some(path) => {
                let seq = covering_sequence(self.scenario, &path.points, self.d_bar())
                    .filter(|q| q.check(self.scenario, self.d_bar(), margin).is_ok());
                if let Some(seq) = seq {
                    let sol = self.solve(&seq)?;
                    evaluated += 1;
                    if sol.objective < best.1.objective - tie {
                        best = (seq, sol);
                    }
                }
                path.length
            }
            None => f64::NEG_INFINITY,
        };
        let mut frontier = BinaryHeap::new();
        let mut prefix: Vec<usize> = Vec::new();
        while best.1.objective > floor + margin {
            // Children of `prefix`, bounded in parallel, folded in order.
            let last = prefix.last().map_or(graph.start_id(), |&g| g + 1);
            let children: Vec<Vec<usize>> = graph
                .neighbors(last)
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| v != graph.start_id() && v != graph.end_id() && !prefix.contains(&(v - 1)))
                .map(|v| {
                    let mut c = prefix.clone();
                    c.push(v - 1);
                    c
                })
                .collect();
            evaluated += children.len();
            if evaluated > max_paths {
                return Err(Error::TooManyPaths { limit: max_paths });
            }
            let bounds = map_ordered(&children, self.exec, |c| self.bound(c));
            for (child, bound) in children.into_iter().zip(bounds) {
                let (complete, sol) = bound?;
                if complete {
                    // Extending a complete route never shortens it.
                    if sol.objective < best.1.objective - tie {
                        best = (AssociationSequence::new(child), sol);
                    }
                } else if sol.objective <= best.1.objective + margin {
                    frontier.push(Node { bound: sol.objective, prefix: child });
                }
            }
            match frontier.pop() {
                Some(node) if node.bound <= best.1.objective + margin => prefix = node.prefix,
                _ => break,
            }
        }
        Ok((best.0, best.1, evaluated))
    }

    /// Lower bound for every route starting with `prefix`: its optimized
    /// length with a straight finish to `uF`. Exact, and cached, when the last
    /// GBS covers `uF`.
    fn bound(&self, prefix: &[usize]) -> Result<(bool, HandoverSolution)> {
        let last = prefix[prefix.len() - 1] + 1;
        let complete = self.graph.neighbors(last).iter().any(|&(n, _)| n == self.graph.end_id());
        let seq = AssociationSequence::new(prefix.to_vec());
        let sol = if complete {
            self.solve(&seq)?
        } else {
            optimize_handovers(self.scenario, &seq, self.d_bar(), &self.solver)?
        };
        Ok((complete, sol))
    }

    /// The straight-flight baseline: feasible only if the direct path stays
    /// within `d_bar` of some GBS throughout.
    pub fn straight(&self) -> PlanResult {
        let started = Instant::now();
        let th = straight_flight_threshold(self.scenario);
        if th.worst_distance > self.d_bar() {
            return PlanResult::infeasible(self.scenario, Method::Straight, self.d_bar(), started);
        }
        let trajectory = straight_flight(self.scenario);
        PlanResult {
            status: PlanStatus::Feasible,
            method: Method::Straight,
            d_bar: self.d_bar(),
            sequence: Some(AssociationSequence::new(trajectory.associations.clone())),
            handovers: None,
            total_time: trajectory.total_time,
            path_length: trajectory.path_length(),
            trajectory,
            sequences_evaluated: 0,
            solve_wall_time: started.elapsed(),
        }
    }

    pub fn plan(&self, method: Method, max_paths: usize, search: OptimalSearch) -> Result<PlanResult> {
        match method {
            Method::Proposed => self.proposed(),
            Method::Optimal => self.optimal(max_paths, search),
            Method::Straight => Ok(self.straight()),
        }
    }
}

/// Frontier entry, popped lowest bound first; ties go to the
/// lexicographically smaller prefix so the search order is fixed.
struct Node {
    bound: f64,
    prefix: Vec<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == CmpOrdering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<CmpOrdering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> CmpOrdering {
        // Reversed: `BinaryHeap` is a max-heap.
        other.bound.total_cmp(&self.bound).then_with(|| other.prefix.cmp(&self.prefix))
    }
}

/// Heuristic planner for an SNR target.
pub fn plan_proposed(s: &Scenario, target: SnrTarget, solver: &SolverConfig) -> Result<PlanResult> {
    Planner::for_target(s, target, solver.clone())?.proposed()
}

/// Optimal planner for an SNR target (branch-and-bound search).
pub fn plan_optimal(s: &Scenario, target: SnrTarget, max_paths: usize, solver: &SolverConfig) -> Result<PlanResult> {
    Planner::for_target(s, target, solver.clone())?.optimal(max_paths, OptimalSearch::default())
}

/// Straight-flight baseline for an SNR target.
pub fn plan_straight(s: &Scenario, target: SnrTarget) -> Result<PlanResult> {
    Ok(Planner::for_target(s, target, SolverConfig::default())?.straight())
}
