//! Capacity-matched node allocation for heterogeneous clusters.
//!
//! Users of a shared cluster ask for a block of nodes by naming how many
//! child processes their parallel program runs and what share of the total
//! work each child carries (ratios summing to 100%). Every node advertises a
//! capacity percentage relative to the best machine in the fleet. This crate
//! picks the combination of available nodes whose summed capacity lands
//! closest to 100% *and* whose capacity profile best matches the requested
//! split — either by brute force or with a seeded genetic solver whose result
//! can be audited against the exact one.
//!
//! ```
//! use capmatch::{exact, fitness::{Request, ShapeMode}, inventory};
//!
//! let fleet = inventory::load_fleet_str("1,80\n2,90\n3,100\n4,50\n5,30\n6,20\n")?;
//! let request = Request::with_default_tolerance(vec![50, 30, 20])?;
//! let result = exact::solve_exact(&fleet, &request, ShapeMode::Absolute)?;
//! assert_eq!(result.best.ids(), [4, 5, 6]);
//! assert_eq!(result.best_report.match_ratio, 1.0);
//! # Ok::<(), capmatch::Error>(())
//! ```
//!
//! Each capability has a runnable example:
//!
//! - `fleet_files` — the fleet file format, validation, class labels,
//!   availability subsets (`cargo run -p capmatch --example fleet_files`)
//! - `score_combination` — scoring one combination against a request in both
//!   shape modes
//! - `exact_search` — exhaustive search with baseline statistics
//! - `evolve` — a seeded genetic-solver run with its per-generation trace
//! - `experiment` — a reduced convergence sweep writing the report files
//!
//! The `capmatch` binary wraps the same functionality as the `allocate`,
//! `exact`, `simulate` and `validate` subcommands.

pub mod cli;
pub mod error;
pub mod exact;
pub mod fitness;
pub mod ga;
pub mod inventory;
pub mod sim;

pub use error::{Error, Result};
pub use exact::ExactResult;
pub use fitness::{Combination, FitnessReport, Request, ShapeMode};
pub use ga::{Ga, GaConfig, GenerationTrace, Individual};
pub use inventory::{Diagnostic, Fleet, Node};
pub use sim::{ExperimentReport, ExperimentSpec};
