//! Exhaustive enumeration solver: the ground-truth oracle the genetic solver
//! is verified against, and the source of the baseline statistics.
//!
//! Enumeration streams combinations one at a time, so memory stays constant
//! even for fleets in the tens of nodes (C(45, 5) is about 1.2 million
//! candidates and solves in roughly a second).

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fitness::{self, Combination, FitnessReport, Request, ShapeMode};
use crate::inventory::Fleet;

/// Streaming iterator over every n-element id subset of a fleet, in
/// lexicographic order of the ascending id lists.
#[derive(Debug)]
pub struct Combinations {
    ids: Vec<u32>,
    cursor: Vec<usize>,
    done: bool,
}

/// All n-subsets of the fleet's ids. Errors when `n` is zero or exceeds the
/// fleet size.
pub fn enumerate(fleet: &Fleet, n: usize) -> Result<Combinations> {
    if n == 0 {
        return Err(Error::EmptyCombination);
    }
    if n > fleet.len() {
        return Err(Error::Infeasible {
            requested: n,
            available: fleet.len(),
        });
    }
    let mut ids = fleet.ids();
    ids.sort_unstable();
    Ok(Combinations {
        ids,
        cursor: (0..n).collect(),
        done: false,
    })
}

impl Iterator for Combinations {
    type Item = Combination;

    fn next(&mut self) -> Option<Combination> {
        if self.done {
            return None;
        }
        let item = Combination::new(
            self.cursor
                .iter()
                .map(|&i| self.ids[i])
                .collect::<Vec<_>>(),
        )
        .expect("cursor indices are distinct");

        // Advance the rightmost index that still has room, then reset the
        // tail right behind it.
        let n = self.cursor.len();
        let a = self.ids.len();
        let mut k = n;
        loop {
            if k == 0 {
                self.done = true;
                break;
            }
            k -= 1;
            if self.cursor[k] < a - n + k {
                self.cursor[k] += 1;
                for j in k + 1..n {
                    self.cursor[j] = self.cursor[j - 1] + 1;
                }
                break;
            }
        }
        Some(item)
    }
}

/// Binomial coefficient C(a, k) by the multiplicative formula.
pub fn binomial(a: u64, k: u64) -> u64 {
    if k > a {
        return 0;
    }
    let k = k.min(a - k);
    let mut result: u64 = 1;
    for i in 0..k {
        // The running product of i+1 consecutive integers is divisible by i+1.
        result = result * (a - i) / (i + 1);
    }
    result
}

/// Outcome of an exhaustive solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub best: Combination,
    pub best_report: FitnessReport,
    pub n_combinations: u64,
    /// Mean match ratio over every enumerated combination.
    pub mean_match_ratio_all: f64,
    /// Mean match ratio over the combinations passing both tolerance checks;
    /// absent when none do.
    pub mean_match_ratio_feasible: Option<f64>,
}

/// Evaluates every combination and returns the minimum-deviation one, with
/// ties broken deterministically (lower capacity deviation, then the
/// lexicographically smallest id list). Repeated runs return the identical
/// result.
pub fn solve_exact(fleet: &Fleet, request: &Request, mode: ShapeMode) -> Result<ExactResult> {
    if fleet.is_empty() {
        return Err(Error::EmptyFleet);
    }
    let mut best: Option<(Combination, FitnessReport)> = None;
    let mut count = 0u64;
    let mut ratio_sum = 0.0f64;
    let mut feasible_sum = 0.0f64;
    let mut feasible_count = 0u64;
    for combo in enumerate(fleet, request.n_request())? {
        let report = fitness::evaluate(&combo, fleet, request, mode)?;
        count += 1;
        ratio_sum += report.match_ratio;
        if report.within_capacity_tolerance && report.within_shape_tolerance {
            feasible_sum += report.match_ratio;
            feasible_count += 1;
        }
        let better = match &best {
            None => true,
            Some((best_combo, best_report)) => {
                fitness::compare_candidates((&report, &combo), (best_report, best_combo))
                    == Ordering::Less
            }
        };
        if better {
            best = Some((combo, report));
        }
    }
    let (best, best_report) = best.expect("enumeration of a non-empty fleet yields items");
    Ok(ExactResult {
        best,
        best_report,
        n_combinations: count,
        mean_match_ratio_all: ratio_sum / count as f64,
        mean_match_ratio_feasible: (feasible_count > 0)
            .then(|| feasible_sum / feasible_count as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inventory::Node;

    fn fleet_of(capacities: &[u32]) -> Fleet {
        Fleet::new(
            capacities
                .iter()
                .enumerate()
                .map(|(i, &c)| Node {
                    id: i as u32 + 1,
                    capacity_pct: c,
                    class_label: 1,
                })
                .collect(),
        )
        .unwrap()
    }

    fn ten_node_fleet() -> Fleet {
        fleet_of(&[80, 90, 100, 100, 90, 90, 50, 80, 50, 70])
    }

    fn request_50_30_20() -> Request {
        Request::with_default_tolerance(vec![50, 30, 20]).unwrap()
    }

    #[test]
    fn counts_match_the_binomial_formula() {
        assert_eq!(enumerate(&ten_node_fleet(), 3).unwrap().count(), 120);
        let twenty = fleet_of(&[70; 20]);
        assert_eq!(enumerate(&twenty, 3).unwrap().count(), 1140);
        let five = fleet_of(&[50, 60, 70, 80, 90]);
        let all: Vec<_> = enumerate(&five, 5).unwrap().collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].ids(), [1, 2, 3, 4, 5]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let five = fleet_of(&[50, 60, 70, 80, 90]);
        let lists: Vec<Vec<u32>> = enumerate(&five, 3)
            .unwrap()
            .map(|c| c.ids().to_vec())
            .collect();
        assert_eq!(
            lists,
            vec![
                vec![1, 2, 3],
                vec![1, 2, 4],
                vec![1, 2, 5],
                vec![1, 3, 4],
                vec![1, 3, 5],
                vec![1, 4, 5],
                vec![2, 3, 4],
                vec![2, 3, 5],
                vec![2, 4, 5],
                vec![3, 4, 5],
            ]
        );
    }

    #[test]
    fn enumerate_rejects_bad_sizes() {
        let fleet = fleet_of(&[50, 60]);
        assert!(matches!(
            enumerate(&fleet, 0).unwrap_err(),
            Error::EmptyCombination
        ));
        assert!(matches!(
            enumerate(&fleet, 3).unwrap_err(),
            Error::Infeasible { requested: 3, available: 2 }
        ));
    }

    #[test]
    fn binomial_spot_values() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(20, 3), 1140);
        assert_eq!(binomial(45, 5), 1_221_759);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(7, 1), 7);
    }

    #[test]
    fn frozen_optimum_of_the_ten_node_instance() {
        // Golden values fixed by an independent exhaustive evaluation of all
        // 120 rows before the solver was written.
        let result = solve_exact(&ten_node_fleet(), &request_50_30_20(), ShapeMode::Absolute)
            .unwrap();
        assert_eq!(result.best.ids(), [7, 9, 10]);
        assert_eq!(result.best_report.fitness_deviation, 80.0);
        assert_eq!(result.n_combinations, 120);
        assert_eq!(result.mean_match_ratio_all, 2.4);
        assert_eq!(result.mean_match_ratio_feasible, None);
    }

    #[test]
    fn telescoping_tie_is_broken_by_capacity_deviation() {
        // In telescoping mode three combinations share the best combined
        // deviation of 80; [7,9,10] wins on the lower capacity deviation.
        let result = solve_exact(&ten_node_fleet(), &request_50_30_20(), ShapeMode::Telescoping)
            .unwrap();
        assert_eq!(result.best.ids(), [7, 9, 10]);
        assert_eq!(result.best_report.fitness_deviation, 80.0);
        assert_eq!(result.best_report.capacity_deviation, 70.0);
    }

    #[test]
    fn perfect_triple_is_found_exactly() {
        let fleet = fleet_of(&[50, 30, 20]);
        let result = solve_exact(&fleet, &request_50_30_20(), ShapeMode::Absolute).unwrap();
        assert_eq!(result.best.ids(), [1, 2, 3]);
        assert_eq!(result.best_report.fitness_deviation, 0.0);
        assert_eq!(result.best_report.match_ratio, 1.0);
        assert_eq!(result.n_combinations, 1);
        assert_eq!(result.mean_match_ratio_feasible, Some(1.0));
    }

    #[test]
    fn full_fleet_request_has_a_single_candidate() {
        let fleet = fleet_of(&[40, 30, 20, 10]);
        let request = Request::with_default_tolerance(vec![40, 30, 20, 10]).unwrap();
        let result = solve_exact(&fleet, &request, ShapeMode::Absolute).unwrap();
        assert_eq!(result.best.ids(), [1, 2, 3, 4]);
        assert_eq!(result.n_combinations, 1);
        assert_eq!(result.best_report.fitness_deviation, 0.0);
    }

    #[test]
    fn solve_is_deterministic() {
        let fleet = ten_node_fleet();
        let request = request_50_30_20();
        let a = solve_exact(&fleet, &request, ShapeMode::Absolute).unwrap();
        let b = solve_exact(&fleet, &request, ShapeMode::Absolute).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn optimum_dominates_every_candidate() {
        let fleet = ten_node_fleet();
        let request = request_50_30_20();
        let result = solve_exact(&fleet, &request, ShapeMode::Absolute).unwrap();
        for combo in enumerate(&fleet, 3).unwrap() {
            let report = fitness::evaluate(&combo, &fleet, &request, ShapeMode::Absolute).unwrap();
            assert!(report.fitness_deviation >= result.best_report.fitness_deviation);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use std::collections::HashSet;

        proptest! {
            #[test]
            fn stream_is_duplicate_free_and_counted(
                caps in proptest::collection::vec(1u32..=100, 1..=12),
                n in 1usize..=12,
            ) {
                let fleet = super::fleet_of(&caps);
                prop_assume!(n <= fleet.len());
                let combos: Vec<_> = enumerate(&fleet, n).unwrap().collect();
                let unique: HashSet<_> = combos.iter().map(|c| c.ids().to_vec()).collect();
                prop_assert_eq!(unique.len(), combos.len());
                prop_assert_eq!(combos.len() as u64, binomial(fleet.len() as u64, n as u64));
                for combo in &combos {
                    prop_assert_eq!(combo.len(), n);
                }
            }

            #[test]
            fn mean_match_ratio_grows_with_subset_size(
                caps in proptest::collection::vec(1u32..=100, 3..=10),
            ) {
                let fleet = super::fleet_of(&caps);
                let mean_for = |n: usize| {
                    let combos: Vec<_> = enumerate(&fleet, n).unwrap().collect();
                    let total: f64 = combos
                        .iter()
                        .map(|c| f64::from(fitness::total_capacity(c, &fleet).unwrap()) / 100.0)
                        .sum();
                    total / combos.len() as f64
                };
                for n in 1..fleet.len() {
                    prop_assert!(mean_for(n + 1) > mean_for(n));
                }
            }
        }
    }
}
