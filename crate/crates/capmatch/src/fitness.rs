//! Scoring of node combinations against a request.
//!
//! A combination is judged on two axes: how close its summed capacity comes
//! to the requested 100%, and how well its capacity profile matches the shape
//! of the requested child ratios. Both are expressed as non-negative
//! deviations; their unit-weight sum is the scalar the solvers minimize.
//!
//! "Neighboring" is made well defined by sorting both the node capacities and
//! the child ratios in descending order before differencing, so every
//! quantity here is invariant under permutations of the input ids.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inventory::Fleet;

pub const DEFAULT_TOLERANCE_PCT: f64 = 5.0;

/// Which reading of the neighboring-difference condition to apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ShapeMode {
    /// Per-pair comparison: the sum of absolute differences between the node
    /// and child difference profiles. The default.
    #[default]
    Absolute,
    /// The telescoped form: only the spans (max minus min) of the two
    /// profiles are compared, so interior structure is ignored.
    Telescoping,
}

/// A user demand: how many nodes, which capacity split, and how much slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RequestRepr")]
pub struct Request {
    n_request: usize,
    child_ratios: Vec<u32>,
    tolerance_pct: f64,
}

#[derive(Deserialize)]
struct RequestRepr {
    child_ratios: Vec<u32>,
    #[serde(default = "default_tolerance")]
    tolerance_pct: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE_PCT
}

impl TryFrom<RequestRepr> for Request {
    type Error = Error;

    fn try_from(repr: RequestRepr) -> Result<Self> {
        Request::new(repr.child_ratios, repr.tolerance_pct)
    }
}

impl Request {
    /// One ratio per child process; the ratios must each be at least 1% and
    /// sum to 100%. The node count is their number, at least 2.
    pub fn new(child_ratios: Vec<u32>, tolerance_pct: f64) -> Result<Self> {
        if child_ratios.len() < 2 {
            return Err(Error::TooFewChildren {
                n: child_ratios.len(),
            });
        }
        if child_ratios.contains(&0) {
            return Err(Error::RatioBelowOne);
        }
        let sum: u32 = child_ratios.iter().sum();
        if sum != 100 {
            return Err(Error::RatioSum { sum });
        }
        if !(tolerance_pct > 0.0 && tolerance_pct <= 100.0) {
            return Err(Error::ToleranceOutOfRange {
                value: tolerance_pct,
            });
        }
        Ok(Self {
            n_request: child_ratios.len(),
            child_ratios,
            tolerance_pct,
        })
    }

    pub fn with_default_tolerance(child_ratios: Vec<u32>) -> Result<Self> {
        Self::new(child_ratios, DEFAULT_TOLERANCE_PCT)
    }

    pub fn n_request(&self) -> usize {
        self.n_request
    }

    pub fn child_ratios(&self) -> &[u32] {
        &self.child_ratios
    }

    pub fn tolerance_pct(&self) -> f64 {
        self.tolerance_pct
    }

    /// Child ratios sorted descending, the canonical shape profile.
    pub fn sorted_child_profile(&self) -> Vec<u32> {
        let mut profile = self.child_ratios.clone();
        profile.sort_unstable_by(|a, b| b.cmp(a));
        profile
    }
}

/// A duplicate-free set of node ids, stored in ascending order. The order in
/// which ids are supplied never matters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>")]
#[serde(into = "Vec<u32>")]
pub struct Combination {
    ids: Vec<u32>,
}

impl Combination {
    pub fn new(ids: impl Into<Vec<u32>>) -> Result<Self> {
        let mut ids = ids.into();
        if ids.is_empty() {
            return Err(Error::EmptyCombination);
        }
        ids.sort_unstable();
        for pair in ids.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateNode { id: pair[0] });
            }
        }
        Ok(Self { ids })
    }

    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

impl TryFrom<Vec<u32>> for Combination {
    type Error = Error;

    fn try_from(ids: Vec<u32>) -> Result<Self> {
        Self::new(ids)
    }
}

impl From<Combination> for Vec<u32> {
    fn from(combo: Combination) -> Self {
        combo.ids
    }
}

/// Ids joined by `+`, e.g. `7+9+10`; the form used in trace files.
impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, id) in self.ids.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

/// Every fitness quantity of one combination measured against a request.
/// Lower deviations are better; a match ratio of exactly 1.0 is the ideal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub total_capacity_pct: u32,
    pub capacity_deviation: f64,
    pub shape_deviation: f64,
    pub fitness_deviation: f64,
    pub match_ratio: f64,
    pub within_capacity_tolerance: bool,
    pub within_shape_tolerance: bool,
}

/// Sum of the combination's node capacities.
pub fn total_capacity(combo: &Combination, fleet: &Fleet) -> Result<u32> {
    combo
        .ids()
        .iter()
        .try_fold(0u32, |acc, &id| Ok(acc + fleet.capacity_of(id)?))
}

/// `|total - 100|` in percentage points, plus whether it stays within the
/// request's tolerance.
pub fn capacity_deviation(combo: &Combination, fleet: &Fleet, request: &Request) -> Result<(f64, bool)> {
    let total = total_capacity(combo, fleet)?;
    let deviation = (f64::from(total) - 100.0).abs();
    Ok((deviation, deviation <= request.tolerance_pct()))
}

/// The combination's capacities sorted descending.
pub fn sorted_capacity_profile(combo: &Combination, fleet: &Fleet) -> Result<Vec<u32>> {
    let mut caps = Vec::with_capacity(combo.len());
    for &id in combo.ids() {
        caps.push(fleet.capacity_of(id)?);
    }
    caps.sort_unstable_by(|a, b| b.cmp(a));
    Ok(caps)
}

/// Mismatch between the node and child difference profiles, plus whether it
/// stays within the relative tolerance `T/100` of the child profile's own
/// difference sum. A single-entry profile has no neighboring pair and
/// deviates by 0.
pub fn shape_deviation(
    combo: &Combination,
    fleet: &Fleet,
    request: &Request,
    mode: ShapeMode,
) -> Result<(f64, bool)> {
    if combo.len() != request.n_request() {
        return Err(Error::WrongCombinationSize {
            actual: combo.len(),
            expected: request.n_request(),
        });
    }
    let node_profile = sorted_capacity_profile(combo, fleet)?;
    let child_profile = request.sorted_child_profile();
    Ok(profile_shape_deviation(
        &node_profile,
        &child_profile,
        request.tolerance_pct(),
        mode,
    ))
}

fn profile_shape_deviation(
    node_profile: &[u32],
    child_profile: &[u32],
    tolerance_pct: f64,
    mode: ShapeMode,
) -> (f64, bool) {
    debug_assert_eq!(node_profile.len(), child_profile.len());
    if node_profile.len() < 2 {
        return (0.0, true);
    }
    let diffs = |profile: &[u32]| -> Vec<i64> {
        profile
            .windows(2)
            .map(|w| i64::from(w[0]) - i64::from(w[1]))
            .collect()
    };
    let (deviation, budget) = match mode {
        ShapeMode::Absolute => {
            let node_diffs = diffs(node_profile);
            let child_diffs = diffs(child_profile);
            let deviation: i64 = node_diffs
                .iter()
                .zip(&child_diffs)
                .map(|(n, c)| (n - c).abs())
                .sum();
            (deviation, child_diffs.iter().sum::<i64>())
        }
        ShapeMode::Telescoping => {
            let span = |profile: &[u32]| i64::from(profile[0]) - i64::from(profile[profile.len() - 1]);
            let child_span = span(child_profile);
            ((span(node_profile) - child_span).abs(), child_span)
        }
    };
    let deviation = deviation as f64;
    (deviation, deviation <= tolerance_pct / 100.0 * budget as f64)
}

/// Full report over both conditions. The scalar `fitness_deviation` is the
/// unit-weight sum of the two deviations. Pure and deterministic: identical
/// inputs give bit-identical reports.
pub fn evaluate(
    combo: &Combination,
    fleet: &Fleet,
    request: &Request,
    mode: ShapeMode,
) -> Result<FitnessReport> {
    if combo.len() != request.n_request() {
        return Err(Error::WrongCombinationSize {
            actual: combo.len(),
            expected: request.n_request(),
        });
    }
    let node_profile = sorted_capacity_profile(combo, fleet)?;
    let total: u32 = node_profile.iter().sum();
    let capacity_deviation = (f64::from(total) - 100.0).abs();
    let within_capacity_tolerance = capacity_deviation <= request.tolerance_pct();
    let (shape_deviation, within_shape_tolerance) = profile_shape_deviation(
        &node_profile,
        &request.sorted_child_profile(),
        request.tolerance_pct(),
        mode,
    );
    Ok(FitnessReport {
        total_capacity_pct: total,
        capacity_deviation,
        shape_deviation,
        fitness_deviation: capacity_deviation + shape_deviation,
        match_ratio: f64::from(total) / 100.0,
        within_capacity_tolerance,
        within_shape_tolerance,
    })
}

/// The total order used wherever a single winner must be picked: lower
/// combined deviation first, then lower capacity deviation, then the
/// lexicographically smallest id list.
pub fn compare_candidates(
    a: (&FitnessReport, &Combination),
    b: (&FitnessReport, &Combination),
) -> Ordering {
    a.0.fitness_deviation
        .total_cmp(&b.0.fitness_deviation)
        .then_with(|| a.0.capacity_deviation.total_cmp(&b.0.capacity_deviation))
        .then_with(|| a.1.cmp(b.1))
}
