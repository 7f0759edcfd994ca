//! A reduced convergence sweep: seeded 20-node fleet, the three standard
//! request cases, two population sizes, and the report files a plotting tool
//! would consume.
//!
//! ```bash
//! cargo run -p capmatch --example experiment
//! ```

use capmatch::ga::GaConfig;
use capmatch::sim::{run_experiment, write_report, ExperimentSpec};

fn main() -> capmatch::Result<()> {
    // Ten repetitions per cell instead of the default hundred keeps this
    // walkthrough quick; drop the override to reproduce the full sweep.
    let spec = ExperimentSpec {
        repetitions: 10,
        ga: GaConfig {
            max_generations: 60,
            ..GaConfig::default()
        },
        ..ExperimentSpec::default()
    };
    let report = run_experiment(&spec)?;

    println!("case  n  pop  exact_dev  exact_R  success  median_gens  plateau");
    for cell in &report.summary.cells {
        println!(
            "{:>4} {:>2} {:>4} {:>10} {:>8.2} {:>8.2} {:>12} {:>8}",
            cell.case_index,
            cell.n_request,
            cell.population_size,
            cell.exact.best_report.fitness_deviation,
            cell.exact.best_report.match_ratio,
            cell.success_rate,
            cell.median_generations_to_optimum
                .map_or("-".into(), |m| m.to_string()),
            cell.generations_to_plateau,
        );
    }

    let dir = std::env::temp_dir().join("capmatch-experiment");
    let summary = write_report(&report, &dir)?;
    println!("\nreport written to {}", summary.display());
    println!(
        "curve files: {}",
        report
            .curves
            .iter()
            .map(|c| format!("curve_{}_{}.csv", c.case_index, c.population_size))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}
