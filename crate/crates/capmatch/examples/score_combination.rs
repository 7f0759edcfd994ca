//! Scoring combinations against a request: capacity totals, the two shape
//! readings, tolerance checks, and the combined deviation the solvers
//! minimize.
//!
//! ```bash
//! cargo run -p capmatch --example score_combination
//! ```

use capmatch::fitness::{evaluate, Combination, Request, ShapeMode};
use capmatch::inventory::load_fleet_path;

fn main() -> capmatch::Result<()> {
    let fleet = load_fleet_path(concat!(env!("CARGO_MANIFEST_DIR"), "/data/fleet10.csv"))?;
    // Three child processes carrying 50%, 30% and 20% of the work.
    let request = Request::with_default_tolerance(vec![50, 30, 20])?;

    println!("combination      total  cap_dev  shape  fitness  R     within");
    for ids in [vec![1u32, 2, 3], vec![4, 5, 7], vec![1, 10, 9], vec![7, 9, 10]] {
        let combo = Combination::new(ids)?;
        let report = evaluate(&combo, &fleet, &request, ShapeMode::Absolute)?;
        println!(
            "{:<16} {:>5} {:>8} {:>6} {:>8} {:>5.2}  {}/{}",
            combo.to_string(),
            report.total_capacity_pct,
            report.capacity_deviation,
            report.shape_deviation,
            report.fitness_deviation,
            report.match_ratio,
            report.within_capacity_tolerance,
            report.within_shape_tolerance,
        );
    }

    // The telescoping reading only compares the profile spans, so interior
    // structure stops mattering.
    let combo = Combination::new(vec![1, 2, 3])?;
    let telescoped = evaluate(&combo, &fleet, &request, ShapeMode::Telescoping)?;
    println!(
        "\n{} telescoping shape deviation: {}",
        combo, telescoped.shape_deviation
    );

    // Identical node ids in any order produce the identical report.
    let shuffled = Combination::new(vec![3, 1, 2])?;
    assert_eq!(
        evaluate(&combo, &fleet, &request, ShapeMode::Absolute)?,
        evaluate(&shuffled, &fleet, &request, ShapeMode::Absolute)?
    );
    println!("permutation invariance holds for {combo}");
    Ok(())
}
