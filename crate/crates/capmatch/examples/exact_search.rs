//! Exhaustive search: the ground truth every other solver is measured
//! against, plus the baseline match-ratio statistics.
//!
//! ```bash
//! cargo run -p capmatch --example exact_search
//! ```

use std::time::Instant;

use capmatch::exact::{binomial, enumerate, solve_exact};
use capmatch::fitness::{Request, ShapeMode};
use capmatch::inventory::load_fleet_path;
use capmatch::sim::{generate_fleet, ExperimentSpec};

fn main() -> capmatch::Result<()> {
    let fleet = load_fleet_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/fleet10.csv"))?;
    let request = Request::with_default_tolerance(vec![50, 30, 20])?;

    println!(
        "{} nodes, {} requested: {} candidate combinations",
        fleet.len(),
        request.n_request(),
        binomial(fleet.len() as u64, request.n_request() as u64)
    );
    let first: Vec<String> = enumerate(&fleet, 3)?.take(4).map(|c| c.to_string()).collect();
    println!("enumeration starts lexicographically: {first:?} ...");

    let result = solve_exact(&fleet, &request, ShapeMode::Absolute)?;
    println!(
        "optimum {} | total {}% deviation {} match ratio {:.2}",
        result.best,
        result.best_report.total_capacity_pct,
        result.best_report.fitness_deviation,
        result.best_report.match_ratio
    );
    println!(
        "mean match ratio over all {} combinations: {:.3} (feasible: {:?})",
        result.n_combinations, result.mean_match_ratio_all, result.mean_match_ratio_feasible
    );

    // Enumeration streams, so fleet-scale instances stay cheap.
    let spec = ExperimentSpec {
        fleet_size: 45,
        fleet_seed: 7,
        ..ExperimentSpec::default()
    };
    let big = generate_fleet(&spec)?;
    let five = Request::with_default_tolerance(vec![30, 20, 20, 20, 10])?;
    let started = Instant::now();
    let scaled = solve_exact(&big, &five, ShapeMode::Absolute)?;
    println!(
        "\n45-node fleet, 5 requested: {} combinations in {:?}, best {} at deviation {}",
        scaled.n_combinations,
        started.elapsed(),
        scaled.best,
        scaled.best_report.fitness_deviation
    );
    Ok(())
}
