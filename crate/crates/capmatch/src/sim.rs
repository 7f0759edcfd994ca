//! Experiment harness: seeded synthetic fleets, the three standard request
//! cases, exact baselines, and genetic-solver convergence sweeps over
//! population sizes.
//!
//! The whole report is a pure function of the [`ExperimentSpec`]: every run
//! seed derives from `fleet_seed` and the cell coordinates through
//! [`run_seed`], so cells are independent and individually re-runnable, and
//! repetitions can execute in parallel without changing a single bit of the
//! output.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, ExactResult};
use crate::fitness::Request;
use crate::ga::{Ga, GaConfig, GenerationTrace};
use crate::inventory::{self, Fleet, Node};

pub const DEFAULT_CAPACITY_CHOICES: [u32; 6] = [50, 60, 70, 80, 90, 100];
pub const DEFAULT_FLEET_SEED: u64 = 13;

/// Everything that defines one experiment sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSpec {
    pub fleet_size: usize,
    /// Capacities are drawn uniformly from this set.
    pub capacity_choices: Vec<u32>,
    pub fleet_seed: u64,
    pub cases: Vec<Request>,
    pub population_sizes: Vec<usize>,
    /// Solver runs per (case, population size) cell.
    pub repetitions: usize,
    /// Template for the per-run solver configuration. `population_size`,
    /// `rng_seed` and `crossover_pairs_per_generation` (twice the population,
    /// so pairing activity scales with the sweep) are derived per cell; the
    /// other knobs are taken as-is.
    pub ga: GaConfig,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            fleet_size: 20,
            capacity_choices: DEFAULT_CAPACITY_CHOICES.to_vec(),
            fleet_seed: DEFAULT_FLEET_SEED,
            cases: default_cases(),
            population_sizes: vec![20, 40],
            repetitions: 100,
            ga: GaConfig::default(),
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.fleet_size == 0 {
            return Err(Error::Config("fleet_size must be at least 1".into()));
        }
        if self.capacity_choices.is_empty() {
            return Err(Error::Config("capacity_choices must not be empty".into()));
        }
        if let Some(&bad) = self
            .capacity_choices
            .iter()
            .find(|c| !(1..=100).contains(*c))
        {
            return Err(Error::Config(format!(
                "capacity choice {bad}% is outside 1..=100"
            )));
        }
        if self.cases.is_empty() {
            return Err(Error::Config("cases must not be empty".into()));
        }
        if self.population_sizes.is_empty() {
            return Err(Error::Config("population_sizes must not be empty".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        Ok(())
    }
}

/// The three standard request cases: 3 nodes at 50:30:20, 4 nodes at
/// 40:20:20:20, and 5 nodes at 30:20:20:20:10, all at 5% tolerance.
pub fn default_cases() -> Vec<Request> {
    vec![
        Request::with_default_tolerance(vec![50, 30, 20]).expect("valid case"),
        Request::with_default_tolerance(vec![40, 20, 20, 20]).expect("valid case"),
        Request::with_default_tolerance(vec![30, 20, 20, 20, 10]).expect("valid case"),
    ]
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The fixed seed-splitting rule: four chained splitmix64 steps folding in
/// the 1-based case index, the population size, and the repetition index.
pub fn run_seed(fleet_seed: u64, case_index: usize, population_size: usize, repetition: usize) -> u64 {
    let mut h = splitmix64(fleet_seed);
    h = splitmix64(h ^ case_index as u64);
    h = splitmix64(h ^ population_size as u64);
    h = splitmix64(h ^ repetition as u64);
    h
}

/// Seeded synthetic fleet: `fleet_size` nodes with capacities drawn uniformly
/// from `capacity_choices`, ids 1.., classes derived. If no draw lands on
/// 100%, the first node is pinned to 100% so the fleet carries its reference
/// node.
pub fn generate_fleet(spec: &ExperimentSpec) -> Result<Fleet> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.fleet_seed);
    let mut capacities: Vec<u32> = (0..spec.fleet_size)
        .map(|_| spec.capacity_choices[rng.gen_range(0..spec.capacity_choices.len())])
        .collect();
    if !capacities.contains(&100) {
        capacities[0] = 100;
    }
    let nodes = capacities
        .iter()
        .enumerate()
        .map(|(i, &capacity_pct)| Node {
            id: i as u32 + 1,
            capacity_pct,
            class_label: 1,
        })
        .collect();
    Ok(Fleet::new(nodes)?.derive_classes())
}

/// One (case, population size) cell of the sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    /// 1-based, matching the curve file names.
    pub case_index: usize,
    pub n_request: usize,
    pub child_ratios: Vec<u32>,
    pub population_size: usize,
    pub repetitions: usize,
    pub exact: ExactResult,
    /// Fraction of repetitions whose best ever reaches the exact optimum.
    pub success_rate: f64,
    /// Median over repetitions of the first generation whose best deviation
    /// equals the exact optimum; absent when most repetitions never reach it.
    pub median_generations_to_optimum: Option<f64>,
    /// First generation at which the aggregated mean match ratio comes within
    /// 1% of its final value.
    pub generations_to_plateau: usize,
    /// Smallest final best deviation seen across repetitions.
    pub min_final_best_deviation: f64,
}

/// What lands in `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub fleet_seed: u64,
    pub fleet_size: usize,
    pub capacity_choices: Vec<u32>,
    pub repetitions: usize,
    pub max_generations: usize,
    pub cells: Vec<CellSummary>,
}

/// Aggregated per-generation curve of one cell, the plot-ready data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub generation: usize,
    pub mean_match_ratio: f64,
    pub mean_best_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub case_index: usize,
    pub population_size: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub fleet: Fleet,
    pub summary: Summary,
    pub curves: Vec<Curve>,
}

fn median_generations(values: &[Option<usize>]) -> Option<f64> {
    let mut sorted: Vec<Option<usize>> = values.to_vec();
    sorted.sort_by_key(|v| v.map_or(u64::MAX, |g| g as u64));
    let n = sorted.len();
    if n == 0 {
        return None;
    }
    if n % 2 == 1 {
        sorted[n / 2].map(|g| g as f64)
    } else {
        match (sorted[n / 2 - 1], sorted[n / 2]) {
            (Some(a), Some(b)) => Some((a + b) as f64 / 2.0),
            _ => None,
        }
    }
}

fn generations_to_plateau(points: &[CurvePoint]) -> usize {
    let Some(last) = points.last() else { return 0 };
    let target = last.mean_match_ratio;
    points
        .iter()
        .find(|p| (p.mean_match_ratio - target).abs() <= 0.01 * target.abs())
        .map(|p| p.generation)
        .unwrap_or(0)
}

/// Runs the whole sweep in memory. For each cell this solves the instance
/// exactly once, then runs `repetitions` seeded solver runs and aggregates
/// their traces. Deterministic: the same spec always yields the same report.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let fleet = generate_fleet(spec)?;
    let mut cells = Vec::new();
    let mut curves = Vec::new();
    for (case_pos, request) in spec.cases.iter().enumerate() {
        let case_index = case_pos + 1;
        for &population_size in &spec.population_sizes {
            let exact = exact::solve_exact(&fleet, request, spec.ga.mode)?;
            let config = GaConfig {
                population_size,
                crossover_pairs_per_generation: population_size * 2,
                ..spec.ga.clone()
            };
            let runs: Vec<Vec<GenerationTrace>> = (0..spec.repetitions)
                .into_par_iter()
                .map(|repetition| {
                    let run_config = GaConfig {
                        rng_seed: run_seed(
                            spec.fleet_seed,
                            case_index,
                            population_size,
                            repetition,
                        ),
                        ..config.clone()
                    };
                    Ok(Ga::new(&fleet, request, run_config)?.evolve().1)
                })
                .collect::<Result<_>>()?;

            let optimum = exact.best_report.fitness_deviation;
            let reached: Vec<Option<usize>> = runs
                .iter()
                .map(|traces| {
                    traces
                        .iter()
                        .find(|t| t.best_fitness_deviation <= optimum)
                        .map(|t| t.generation_index)
                })
                .collect();
            let successes = reached.iter().filter(|r| r.is_some()).count();
            let min_final_best_deviation = runs
                .iter()
                .map(|traces| traces.last().expect("traces never empty").best_fitness_deviation)
                .fold(f64::INFINITY, f64::min);

            let longest = runs.iter().map(Vec::len).max().unwrap_or(0);
            let points: Vec<CurvePoint> = (0..longest)
                .map(|generation| {
                    let at: Vec<&GenerationTrace> =
                        runs.iter().filter_map(|traces| traces.get(generation)).collect();
                    let count = at.len() as f64;
                    CurvePoint {
                        generation,
                        mean_match_ratio: at.iter().map(|t| t.mean_match_ratio).sum::<f64>() / count,
                        mean_best_deviation: at
                            .iter()
                            .map(|t| t.best_fitness_deviation)
                            .sum::<f64>()
                            / count,
                    }
                })
                .collect();

            cells.push(CellSummary {
                case_index,
                n_request: request.n_request(),
                child_ratios: request.child_ratios().to_vec(),
                population_size,
                repetitions: spec.repetitions,
                exact,
                success_rate: successes as f64 / spec.repetitions as f64,
                median_generations_to_optimum: median_generations(&reached),
                generations_to_plateau: generations_to_plateau(&points),
                min_final_best_deviation,
            });
            curves.push(Curve {
                case_index,
                population_size,
                points,
            });
        }
    }
    Ok(ExperimentReport {
        fleet,
        summary: Summary {
            fleet_seed: spec.fleet_seed,
            fleet_size: spec.fleet_size,
            capacity_choices: spec.capacity_choices.clone(),
            repetitions: spec.repetitions,
            max_generations: spec.ga.max_generations,
            cells,
        },
        curves,
    })
}

/// Materializes a report under `dir`: `summary.json`, one
/// `curve_<case>_<pop>.csv` per cell, and `fleet.csv` in the fleet file
/// format. Returns the summary path.
pub fn write_report(report: &ExperimentReport, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let summary_path = dir.join("summary.json");
    let mut json = serde_json::to_string_pretty(&report.summary)?;
    json.push('\n');
    fs::write(&summary_path, json)?;
    for curve in &report.curves {
        let path = dir.join(format!(
            "curve_{}_{}.csv",
            curve.case_index, curve.population_size
        ));
        let mut file = fs::File::create(path)?;
        writeln!(file, "generation,mean_match_ratio,mean_best_deviation")?;
        for point in &curve.points {
            writeln!(
                file,
                "{},{},{}",
                point.generation, point.mean_match_ratio, point.mean_best_deviation
            )?;
        }
    }
    let mut fleet_file = fs::File::create(dir.join("fleet.csv"))?;
    inventory::save_fleet(&report.fleet, &mut fleet_file)?;
    Ok(summary_path)
}
