//! Genetic solver over node combinations.
//!
//! Individuals are combinations and genes are nodes. Each generation runs
//! four phases in a fixed RNG order so a run replays bit-for-bit from its
//! seed:
//!
//! 1. crossover: random parent pairs exchange the node at one position of
//!    their canonical id lists; children holding a node twice are thrown
//!    away, the rest join the selection pool;
//! 2. mutation: with a per-individual probability, two nodes inside a
//!    combination are interchanged; the set (and therefore the fitness) is
//!    unchanged, and the copy is appended to the pool so the combination
//!    occupies more roulette mass;
//! 3. selection: the best individuals pass through unconditionally
//!    (elitism), and the remaining slots are filled by stochastic sampling
//!    with replacement on a roulette wheel over the whole pool;
//! 4. tracing: per-generation statistics are recorded, starting with the
//!    initial population as generation 0.

use std::cmp::Ordering;
use std::io::Write;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitness::{self, Combination, FitnessReport, Request, ShapeMode};
use crate::inventory::Fleet;

/// Tuning knobs for one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub max_generations: usize,
    /// How many of the best individuals survive unconditionally.
    pub elitism_count: usize,
    /// Parent pairs drawn per generation.
    pub crossover_pairs_per_generation: usize,
    /// Per-individual chance of the fitness-preserving swap mutation.
    pub mutation_probability: f64,
    pub rng_seed: u64,
    pub mode: ShapeMode,
    /// Stop after this many generations without best-fitness improvement.
    pub stop_on_stagnation: Option<usize>,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 20,
            max_generations: 100,
            elitism_count: 1,
            // Twice the default population: novelty only ever comes from
            // crossover (the swap mutation is fitness-preserving by design),
            // so pairing has to run hot before drift dries the pool up.
            crossover_pairs_per_generation: 40,
            mutation_probability: 0.1,
            rng_seed: 0,
            mode: ShapeMode::Absolute,
            stop_on_stagnation: None,
        }
    }
}

/// One population member: a combination with its memoized report.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub combo: Combination,
    pub report: FitnessReport,
}

/// Per-generation statistics of an evolve run.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationTrace {
    pub generation_index: usize,
    pub best_fitness_deviation: f64,
    pub mean_fitness_deviation: f64,
    pub mean_match_ratio: f64,
    pub best_combo: Combination,
}

/// Rescaled selection weights: raw weight `1 / (1 + deviation)`, normalized
/// to sum to 100 (percent). Every weight is strictly positive, so no
/// individual is ever unreachable.
pub fn roulette_weights(pool: &[Individual]) -> Vec<f64> {
    let raw: Vec<f64> = pool
        .iter()
        .map(|i| 1.0 / (1.0 + i.report.fitness_deviation))
        .collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|r| r / total * 100.0).collect()
}

fn compare(a: &Individual, b: &Individual) -> Ordering {
    fitness::compare_candidates((&a.report, &a.combo), (&b.report, &b.combo))
}

fn best_of(population: &[Individual]) -> &Individual {
    population
        .iter()
        .min_by(|a, b| compare(a, b))
        .expect("population is never empty")
}

/// A solver run bound to one fleet and request.
#[derive(Debug)]
pub struct Ga<'a> {
    fleet: &'a Fleet,
    request: &'a Request,
    config: GaConfig,
}

impl<'a> Ga<'a> {
    pub fn new(fleet: &'a Fleet, request: &'a Request, config: GaConfig) -> Result<Self> {
        if fleet.is_empty() {
            return Err(Error::EmptyFleet);
        }
        if request.n_request() > fleet.len() {
            return Err(Error::Infeasible {
                requested: request.n_request(),
                available: fleet.len(),
            });
        }
        if config.population_size < 2 {
            return Err(Error::Config("population_size must be at least 2".into()));
        }
        if config.elitism_count == 0 || config.elitism_count >= config.population_size {
            return Err(Error::Config(
                "elitism_count must be at least 1 and below population_size".into(),
            ));
        }
        if !(0.0..=1.0).contains(&config.mutation_probability) {
            return Err(Error::Config("mutation_probability must be within 0..=1".into()));
        }
        if config.max_generations == 0 {
            return Err(Error::Config("max_generations must be at least 1".into()));
        }
        if config.crossover_pairs_per_generation == 0 {
            return Err(Error::Config(
                "crossover_pairs_per_generation must be at least 1".into(),
            ));
        }
        Ok(Self {
            fleet,
            request,
            config,
        })
    }

    pub fn config(&self) -> &GaConfig {
        &self.config
    }

    /// Non-fatal advisories; the run proceeds regardless.
    pub fn warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.config.population_size < self.fleet.len() {
            warnings.push(format!(
                "population_size {} is below the fleet size {}; random initialization may cover the node pool poorly",
                self.config.population_size,
                self.fleet.len()
            ));
        }
        warnings
    }

    /// `population_size` random valid combinations. Duplicate combinations
    /// across the population are allowed; duplicate nodes within one are not.
    pub fn init_population<R: Rng>(&self, rng: &mut R) -> Vec<Individual> {
        let ids = self.fleet.ids();
        (0..self.config.population_size)
            .map(|_| {
                let picked = rand::seq::index::sample(rng, ids.len(), self.request.n_request());
                let combo = Combination::new(
                    picked.iter().map(|i| ids[i]).collect::<Vec<_>>(),
                )
                .expect("sampled indices are distinct");
                let report = fitness::evaluate(&combo, self.fleet, self.request, self.config.mode)
                    .expect("combination drawn from the fleet");
                Individual { combo, report }
            })
            .collect()
    }

    /// Exchanges the node at one random position of the parents' canonical id
    /// lists. Children holding the same node twice are discarded, so 0, 1 or
    /// 2 offspring come back.
    pub fn crossover<R: Rng>(
        &self,
        parent_a: &Individual,
        parent_b: &Individual,
        rng: &mut R,
    ) -> Vec<Individual> {
        let position = rng.gen_range(0..self.request.n_request());
        self.crossover_at(parent_a, parent_b, position)
    }

    fn crossover_at(
        &self,
        parent_a: &Individual,
        parent_b: &Individual,
        position: usize,
    ) -> Vec<Individual> {
        let mut children = Vec::with_capacity(2);
        for (keeper, donor) in [(parent_a, parent_b), (parent_b, parent_a)] {
            let mut ids = keeper.combo.ids().to_vec();
            ids[position] = donor.combo.ids()[position];
            if let Ok(combo) = Combination::new(ids) {
                let report = fitness::evaluate(&combo, self.fleet, self.request, self.config.mode)
                    .expect("offspring ids come from the fleet");
                children.push(Individual { combo, report });
            }
        }
        children
    }

    /// Interchanges two nodes inside the combination. The node set, and
    /// therefore the fitness, is unchanged; callers append the returned copy
    /// to the selection pool, which is what raises the combination's survival
    /// odds. The memoized report is reused as-is.
    pub fn swap_mutation<R: Rng>(&self, individual: &Individual, rng: &mut R) -> Individual {
        let n = individual.combo.len();
        let mut ids = individual.combo.ids().to_vec();
        if n >= 2 {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            ids.swap(i, j);
        }
        let combo = Combination::new(ids).expect("a swap keeps ids distinct");
        debug_assert_eq!(combo, individual.combo);
        Individual {
            combo,
            report: individual.report.clone(),
        }
    }

    fn mutation_phase<R: Rng>(&self, pool: &mut Vec<Individual>, rng: &mut R) {
        let snapshot = pool.len();
        for i in 0..snapshot {
            if rng.gen::<f64>() < self.config.mutation_probability {
                let copy = self.swap_mutation(&pool[i], rng);
                pool.push(copy);
            }
        }
    }

    /// Elitism plus stochastic sampling with replacement: the best
    /// `elitism_count` individuals are copied through unconditionally and the
    /// remaining slots are independent roulette draws over the whole pool.
    /// The output always has exactly `population_size` members.
    pub fn select_next_generation<R: Rng>(
        &self,
        pool: &[Individual],
        rng: &mut R,
    ) -> Vec<Individual> {
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.sort_by(|&i, &j| compare(&pool[i], &pool[j]));
        let mut next: Vec<Individual> = order
            .iter()
            .take(self.config.elitism_count)
            .map(|&i| pool[i].clone())
            .collect();
        let weights = roulette_weights(pool);
        let wheel = WeightedIndex::new(&weights).expect("weights are strictly positive");
        while next.len() < self.config.population_size {
            next.push(pool[wheel.sample(rng)].clone());
        }
        next
    }

    /// Runs the full generation loop and returns the best individual ever
    /// seen (by elitism, also the final generation's best) together with one
    /// trace per generation, beginning with the initial population.
    pub fn evolve(&self) -> (Individual, Vec<GenerationTrace>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.rng_seed);
        let mut population = self.init_population(&mut rng);
        let mut traces = vec![self.trace_of(0, &population)];
        let mut best = best_of(&population).clone();
        let mut stagnant = 0usize;
        for generation in 1..=self.config.max_generations {
            let mut pool = population.clone();
            for _ in 0..self.config.crossover_pairs_per_generation {
                let (i, j) = pick_two_distinct(population.len(), &mut rng);
                pool.extend(self.crossover(&population[i], &population[j], &mut rng));
            }
            self.mutation_phase(&mut pool, &mut rng);
            population = self.select_next_generation(&pool, &mut rng);
            traces.push(self.trace_of(generation, &population));

            let generation_best = best_of(&population);
            if generation_best.report.fitness_deviation < best.report.fitness_deviation {
                stagnant = 0;
            } else {
                stagnant += 1;
            }
            if compare(generation_best, &best) == Ordering::Less {
                best = generation_best.clone();
            }
            if self.config.stop_on_stagnation.is_some_and(|k| stagnant >= k) {
                break;
            }
        }
        (best, traces)
    }

    fn trace_of(&self, generation_index: usize, population: &[Individual]) -> GenerationTrace {
        let best = best_of(population);
        let count = population.len() as f64;
        GenerationTrace {
            generation_index,
            best_fitness_deviation: best.report.fitness_deviation,
            mean_fitness_deviation: population
                .iter()
                .map(|i| i.report.fitness_deviation)
                .sum::<f64>()
                / count,
            mean_match_ratio: population.iter().map(|i| i.report.match_ratio).sum::<f64>() / count,
            best_combo: best.combo.clone(),
        }
    }
}

fn pick_two_distinct<R: Rng>(len: usize, rng: &mut R) -> (usize, usize) {
    debug_assert!(len >= 2);
    let first = rng.gen_range(0..len);
    let second = rng.gen_range(0..len - 1);
    let second = if second >= first { second + 1 } else { second };
    (first, second)
}

/// Writes traces as CSV with the header
/// `generation,best_fitness_deviation,mean_fitness_deviation,mean_match_ratio,best_combo`
/// where the combination ids are joined by `+`.
pub fn write_trace_csv<W: Write>(traces: &[GenerationTrace], mut writer: W) -> std::io::Result<()> {
    writeln!(
        writer,
        "generation,best_fitness_deviation,mean_fitness_deviation,mean_match_ratio,best_combo"
    )?;
    for trace in traces {
        writeln!(
            writer,
            "{},{},{},{},{}",
            trace.generation_index,
            trace.best_fitness_deviation,
            trace.mean_fitness_deviation,
            trace.mean_match_ratio,
            trace.best_combo
        )?;
    }
    Ok(())
}
