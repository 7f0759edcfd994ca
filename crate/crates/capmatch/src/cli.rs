//! Command-line surface: `allocate`, `exact`, `simulate`, `validate`.
//!
//! Machine contract: results go to stdout as a single JSON document (the
//! `simulate` command prints the summary path instead), diagnostics go to
//! stderr, and exit codes classify failures — 0 success, 2 parse problems,
//! 3 validation problems, 4 infeasible requests, 5 I/O trouble.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact;
use crate::fitness::{Combination, FitnessReport, Request, ShapeMode};
use crate::ga::{self, Ga, GaConfig};
use crate::inventory::{self, Diagnostic};
use crate::sim::{self, ExperimentSpec};

#[derive(Parser)]
#[command(
    name = "capmatch",
    version,
    about = "Capacity-matched node allocation for heterogeneous clusters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pick the best node combination for a request (genetic solver by default)
    Allocate(AllocateArgs),
    /// Exhaustively evaluate every combination and report the true optimum
    Exact(ExactArgs),
    /// Run the convergence experiment sweep and write its report files
    Simulate(SimulateArgs),
    /// Check a fleet file and list per-line problems
    Validate(ValidateArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Fleet file: one `id,capacity_pct[,class_label]` record per line
    #[arg(long)]
    fleet: PathBuf,
    /// Child capacity ratios, e.g. 50,30,20; they must sum to 100
    #[arg(long, value_delimiter = ',', required = true)]
    ratios: Vec<u32>,
    /// Allowed deviation from the ideal, in percent
    #[arg(long, default_value_t = 5.0)]
    tolerance: f64,
    /// Shape-deviation mode
    #[arg(long, value_enum, default_value_t = ShapeMode::Absolute)]
    mode: ShapeMode,
}

#[derive(Args)]
struct AllocateArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Which solver decides the allocation
    #[arg(long, value_enum, default_value_t = SolverKind::Ega)]
    solver: SolverKind,
    /// Genetic solver settings as a TOML key-value file; explicit flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for the genetic solver
    #[arg(long)]
    seed: Option<u64>,
    /// Population size for the genetic solver
    #[arg(long)]
    pop: Option<usize>,
    /// Generation budget for the genetic solver
    #[arg(long)]
    generations: Option<usize>,
    /// Directory for the per-generation trace CSV (genetic solver only)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExactArgs {
    #[command(flatten)]
    instance: InstanceArgs,
}

#[derive(Args)]
struct SimulateArgs {
    /// Experiment spec as a TOML file; explicit flags win
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Output directory for summary.json, curve CSVs and fleet.csv
    #[arg(long, default_value = "capmatch-run")]
    out: PathBuf,
    #[arg(long)]
    fleet_size: Option<usize>,
    #[arg(long)]
    fleet_seed: Option<u64>,
    /// Population sizes to sweep, e.g. 20,40
    #[arg(long, value_delimiter = ',')]
    pop: Vec<usize>,
    /// Solver runs per (case, population) cell
    #[arg(long)]
    repetitions: Option<usize>,
    /// Generation budget per solver run
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ShapeMode>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Fleet file to check
    #[arg(long)]
    fleet: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
enum SolverKind {
    Ega,
    Exact,
}

/// The decision artifact `allocate` prints.
#[derive(Debug, Clone, Serialize)]
struct AllocationOutcome {
    request: Request,
    solver: SolverKind,
    best: Combination,
    report: FitnessReport,
    trace_path: Option<String>,
    wall_time_ms: u64,
}

#[derive(Serialize)]
struct ValidationOutcome<'a> {
    fleet: String,
    clean: bool,
    problems: &'a [Diagnostic],
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> u8 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Allocate(args) => cmd_allocate(args),
        Command::Exact(args) => cmd_exact(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Validate(args) => cmd_validate(args),
    };
    match result {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error}");
            exit_code(&error)
        }
    }
}

fn exit_code(error: &Error) -> u8 {
    match error {
        Error::Parse { .. } => 2,
        Error::Infeasible { .. } => 4,
        Error::Io(_) | Error::Json(_) => 5,
        _ => 3,
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn load_instance(args: &InstanceArgs) -> Result<(inventory::Fleet, Request)> {
    let fleet = inventory::load_fleet_path(&args.fleet)?;
    let request = Request::new(args.ratios.clone(), args.tolerance)?;
    Ok((fleet, request))
}

fn ga_config_from(args: &AllocateArgs) -> Result<GaConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            toml::from_str::<GaConfig>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => GaConfig::default(),
    };
    config.mode = args.instance.mode;
    if let Some(seed) = args.seed {
        config.rng_seed = seed;
    }
    if let Some(pop) = args.pop {
        config.population_size = pop;
    }
    if let Some(generations) = args.generations {
        config.max_generations = generations;
    }
    Ok(config)
}

fn cmd_allocate(args: AllocateArgs) -> Result<u8> {
    let (fleet, request) = load_instance(&args.instance)?;
    let started = Instant::now();
    let (best, report, trace_path) = match args.solver {
        SolverKind::Exact => {
            let result = exact::solve_exact(&fleet, &request, args.instance.mode)?;
            (result.best, result.best_report, None)
        }
        SolverKind::Ega => {
            let config = ga_config_from(&args)?;
            let solver = Ga::new(&fleet, &request, config)?;
            for warning in solver.warnings() {
                eprintln!("warning: {warning}");
            }
            let (individual, traces) = solver.evolve();
            let trace_path = match &args.out {
                Some(dir) => {
                    fs::create_dir_all(dir)?;
                    let path = dir.join("trace.csv");
                    let mut file = fs::File::create(&path)?;
                    ga::write_trace_csv(&traces, &mut file)?;
                    Some(path.display().to_string())
                }
                None => None,
            };
            (individual.combo, individual.report, trace_path)
        }
    };
    let outcome = AllocationOutcome {
        request,
        solver: args.solver,
        best,
        report,
        trace_path,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    print_json(&outcome)?;
    Ok(0)
}

fn cmd_exact(args: ExactArgs) -> Result<u8> {
    let (fleet, request) = load_instance(&args.instance)?;
    let result = exact::solve_exact(&fleet, &request, args.instance.mode)?;
    print_json(&result)?;
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> Result<u8> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            toml::from_str::<ExperimentSpec>(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentSpec::default(),
    };
    if let Some(fleet_size) = args.fleet_size {
        spec.fleet_size = fleet_size;
    }
    if let Some(fleet_seed) = args.fleet_seed {
        spec.fleet_seed = fleet_seed;
    }
    if !args.pop.is_empty() {
        spec.population_sizes = args.pop.clone();
    }
    if let Some(repetitions) = args.repetitions {
        spec.repetitions = repetitions;
    }
    if let Some(generations) = args.generations {
        spec.ga.max_generations = generations;
    }
    if let Some(mode) = args.mode {
        spec.ga.mode = mode;
    }
    let report = sim::run_experiment(&spec)?;
    let summary_path = sim::write_report(&report, &args.out)?;
    println!("{}", summary_path.display());
    Ok(0)
}

fn cmd_validate(args: ValidateArgs) -> Result<u8> {
    let text = fs::read_to_string(&args.fleet)?;
    let problems = inventory::validate_fleet_str(&text);
    for problem in &problems {
        eprintln!("line {}: {}", problem.line, problem.message);
    }
    print_json(&ValidationOutcome {
        fleet: args.fleet.display().to_string(),
        clean: problems.is_empty(),
        problems: &problems,
    })?;
    Ok(if problems.is_empty() { 0 } else { 3 })
}
