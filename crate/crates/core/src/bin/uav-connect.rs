use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uav_connect::association::DEFAULT_MAX_PATHS;
use uav_connect::bench::{run_benchmark, BenchConfig, RhoMode, LARGE_M};
use uav_connect::connectivity::{build_graph, is_feasible, max_attainable_snr};
use uav_connect::handover::SolverConfig;
use uav_connect::parallel::Execution;
use uav_connect::plan::{Method, OptimalSearch, Planner};
use uav_connect::scenario::{compute_coverage_radius, Scenario, SnrTarget};
use uav_connect::svg::render_svg;
use uav_connect::sweep::{linear_grid, sweep_snr, sweep_to_csv};
use uav_connect::trajectory::verify_connectivity;
use uav_connect::Error;

/// Minimum-time UAV trajectories under a cellular connectivity constraint.
///
/// Exit codes: 0 success, 1 infeasible, 2 input error, 3 resource limit.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a trajectory for one scenario and SNR target.
    Plan(PlanArgs),
    /// Report whether a target is attainable and the largest attainable one.
    Feasible(FeasibleArgs),
    /// Mission time of every planner over a range of SNR targets.
    Sweep(SweepArgs),
    /// Compare the heuristic with the optimal planner on random layouts.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolverArgs {
    /// Iteration cap per smoothing level of the handover solver.
    #[arg(long, default_value_t = SolverConfig::default().max_iterations)]
    max_iterations: usize,
    /// Relative objective decrease at which a smoothing level stops.
    #[arg(long, default_value_t = SolverConfig::default().objective_tol)]
    objective_tol: f64,
    /// Feasibility tolerance, as a fraction of the coverage radius.
    #[arg(long, default_value_t = SolverConfig::default().constraint_tol)]
    constraint_tol: f64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            max_iterations: self.max_iterations,
            objective_tol: self.objective_tol,
            constraint_tol: self.constraint_tol,
            ..SolverConfig::default()
        }
    }
}

#[derive(Args)]
struct PlanArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    /// SNR target in dB.
    #[arg(long)]
    rho_db: f64,
    /// proposed, optimal or straight.
    #[arg(long, default_value = "proposed")]
    method: Method,
    /// Waypoint CSV output (`i,x,y,gbs,T_i`); stdout if omitted.
    #[arg(long)]
    waypoints: Option<PathBuf>,
    /// Sampled trajectory CSV output (`t_s,x_m,y_m,associated_gbs,snr_db`).
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Sampling interval for --trajectory, seconds.
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    /// SVG plot output.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Cap on association sequences examined by the optimal planner.
    #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
    max_paths: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct FeasibleArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    /// SNR target in dB; only the attainable maximum is reported if omitted.
    #[arg(long)]
    rho_db: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    rho_min: f64,
    #[arg(long, default_value_t = 20.0)]
    rho_max: f64,
    #[arg(long, default_value_t = 41)]
    steps: usize,
    /// CSV output; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
    max_paths: usize,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = BenchConfig::default().instance_count)]
    instances: usize,
    /// GBSs per instance.
    #[arg(long, default_value_t = BenchConfig::default().num_gbs)]
    m: usize,
    #[arg(long, default_value_t = BenchConfig::default().rng_seed)]
    seed: u64,
    /// Fixed SNR target in dB instead of each instance's maximum.
    #[arg(long)]
    rho_db: Option<f64>,
    /// Summary CSV output; stdout if omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Per-instance CSV output.
    #[arg(long)]
    per_instance: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_PATHS)]
    max_paths: usize,
    /// Solve every simple route instead of the pruned search.
    #[arg(long)]
    exhaustive: bool,
    /// Allow more GBSs than the default guard.
    #[arg(long)]
    allow_large_m: bool,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible | Error::Unreachable | Error::UnattainableSnr { .. } => 1,
        Error::TooManyPaths { .. } | Error::ResourceLimit(_) => 3,
        _ => 2,
    }
}

fn load(path: &Path) -> Result<Scenario, Error> {
    Scenario::from_json_file(path).map_err(|e| match e {
        Error::Io(io) => Error::InvalidArgument(format!("{}: {io}", path.display())),
        other => other,
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn plan(args: &PlanArgs) -> Result<ExitCode, Error> {
    let s = load(&args.scenario)?;
    if !(args.dt > 0.0 && args.dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("--dt must be positive, got {}", args.dt)));
    }
    let planner = Planner::for_target(&s, SnrTarget::new(args.rho_db), args.solver.config())?;
    let result = planner.plan(args.method, args.max_paths, OptimalSearch::default())?;
    let d_bar = planner.d_bar();
    eprintln!("coverage radius: {d_bar:.3} m");
    if let Some(path) = &args.svg {
        fs::write(path, render_svg(&s, std::slice::from_ref(&result), d_bar))?;
    }
    if !result.is_feasible() {
        eprintln!("{}: infeasible at {:.4} dB", result.method, args.rho_db);
        return Ok(ExitCode::from(1));
    }
    let report = verify_connectivity(&s, &result.trajectory, d_bar);
    eprintln!(
        "{}: sequence {}, T = {:.6} s, length {:.3} m, {} sequences solved in {:.3} s, connectivity {}",
        result.method,
        result.sequence.as_ref().map(|q| q.to_string()).unwrap_or_default(),
        result.total_time,
        result.path_length,
        result.sequences_evaluated,
        result.solve_wall_time.as_secs_f64(),
        if report.is_clean() { "verified" } else { "VIOLATED" },
    );
    emit(args.waypoints.as_deref(), &result.trajectory.to_waypoints_csv())?;
    if let Some(path) = &args.trajectory {
        fs::write(path, result.trajectory.to_samples_csv(&s, args.dt)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn feasible(args: &FeasibleArgs) -> Result<ExitCode, Error> {
    let s = load(&args.scenario)?;
    let max = max_attainable_snr(&s);
    match &max {
        Ok(m) => println!(
            "max attainable SNR: {:.4} dB (critical radius {:.3} m, route {})",
            m.rho_max_db,
            m.critical_d_bar,
            std::iter::once("U0".to_string())
                .chain(m.bottleneck_path.iter().map(|g| format!("G{}", g + 1)))
                .chain(std::iter::once("UF".to_string()))
                .collect::<Vec<_>>()
                .join(" -> ")
        ),
        Err(e) => println!("max attainable SNR: none ({e})"),
    }
    let Some(rho) = args.rho_db else {
        return Ok(if max.is_ok() { ExitCode::SUCCESS } else { ExitCode::from(1) });
    };
    let ok = match compute_coverage_radius(&s, SnrTarget::new(rho)) {
        Ok(d) => {
            let ok = is_feasible(&build_graph(&s, d)?);
            println!("target {rho:.4} dB: radius {:.3} m, {}", d.meters(), if ok { "feasible" } else { "infeasible" });
            ok
        }
        Err(e @ Error::UnattainableSnr { .. }) => {
            println!("target {rho:.4} dB: infeasible ({e})");
            false
        }
        Err(e) => return Err(e),
    };
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sweep(args: &SweepArgs) -> Result<ExitCode, Error> {
    let s = load(&args.scenario)?;
    let grid = linear_grid(args.rho_min, args.rho_max, args.steps)?;
    let rows = sweep_snr(&s, &grid, &args.solver.config(), args.max_paths, execution(args.sequential))?;
    emit(args.out.as_deref(), &sweep_to_csv(&rows))?;
    Ok(ExitCode::SUCCESS)
}

fn bench(args: &BenchArgs) -> Result<ExitCode, Error> {
    let cfg = BenchConfig {
        instance_count: args.instances,
        num_gbs: args.m,
        rng_seed: args.seed,
        max_paths: args.max_paths,
        rho: args.rho_db.map_or(RhoMode::PerInstanceMax, RhoMode::Fixed),
        solver: args.solver.config(),
        search: if args.exhaustive { OptimalSearch::Exhaustive } else { OptimalSearch::BranchAndBound },
        allow_large_m: args.allow_large_m,
        ..BenchConfig::default()
    };
    if cfg.num_gbs > LARGE_M && cfg.allow_large_m {
        eprintln!("warning: {} GBSs is above {LARGE_M}; the optimal search may not finish", cfg.num_gbs);
    }
    eprintln!("config: {}", serde_json::to_string(&cfg).expect("config serializes"));
    let exec = execution(args.sequential);
    let started = std::time::Instant::now();
    let summary = run_benchmark(&cfg, exec)?;
    eprintln!(
        "{} instances in {:.2} s ({}): mean gap {:.4}%, {} infeasible, {} failed",
        summary.instance_count,
        started.elapsed().as_secs_f64(),
        if exec.is_parallel() { "parallel" } else { "sequential" },
        summary.mean_gap_pct,
        summary.infeasible_count,
        summary.failed_count
    );
    emit(args.summary.as_deref(), &summary.to_summary_csv())?;
    if let Some(path) = &args.per_instance {
        fs::write(path, summary.to_instances_csv())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Plan(a) => plan(a),
        Command::Feasible(a) => feasible(a),
        Command::Sweep(a) => sweep(a),
        Command::Bench(a) => bench(a),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    })
}
