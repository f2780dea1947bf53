//! Randomized property suites for the structural results on Dirichlet
//! bandits, plus a Monte Carlo cross-check of the recursion.
//!
//! Every suite draws `trials` independent instances. Trial `i` uses its own
//! generator seeded with [`split_seed`]`(seed, i)`, so reports do not depend
//! on the thread count and any listed violation can be replayed from its
//! instance seed alone.

mod montecarlo;
mod suites;

use std::fmt::Write as _;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use montecarlo::{simulate_policy, McEstimate, MC_BLOCK};
pub use suites::*;

use crate::discount::DiscountSeq;
use crate::index::IndexError;
use crate::measure::DiscreteMeasure;
use crate::scalar::format_sig;
use crate::solver::{Arithmetic, SolveError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("generator produced an invalid instance (instance seed {seed}): {reason}")]
    GeneratorFailed { seed: u64, reason: String },
    #[error("instance seed {seed}: {source}")]
    Solve { seed: u64, source: SolveError },
    #[error("instance seed {seed}: {source}")]
    Index { seed: u64, source: IndexError },
    #[error("invalid suite parameter: {0}")]
    InvalidParameter(&'static str),
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed of trial `index` under `seed`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    mix(seed ^ mix(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

pub fn rng_for(instance_seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(instance_seed)
}

/// Shape of randomly generated instances. Locations fall on a 1/8 grid and
/// masses on a 1/4 grid so that the same instances run unchanged in exact
/// arithmetic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceGen {
    pub seed: u64,
    pub max_horizon: usize,
    pub max_atoms: usize,
    pub location_range: (f64, f64),
    pub mass_range: (f64, f64),
}

impl Default for InstanceGen {
    fn default() -> Self {
        Self {
            seed: 0,
            max_horizon: 6,
            max_atoms: 3,
            location_range: (0.0, 1.0),
            mass_range: (0.5, 4.0),
        }
    }
}

impl InstanceGen {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn location(&self, rng: &mut impl Rng) -> f64 {
        let lo = (self.location_range.0 * 8.0).ceil() as i64;
        let hi = (self.location_range.1 * 8.0).floor() as i64;
        rng.random_range(lo..=hi.max(lo)) as f64 / 8.0
    }

    pub fn mass(&self, rng: &mut impl Rng) -> f64 {
        let lo = ((self.mass_range.0 * 4.0).ceil() as i64).max(1);
        let hi = (self.mass_range.1 * 4.0).floor() as i64;
        rng.random_range(lo..=hi.max(lo)) as f64 / 4.0
    }

    pub fn horizon(&self, rng: &mut impl Rng, min: usize) -> usize {
        rng.random_range(min..=self.max_horizon.max(min))
    }

    /// A probability distribution with between `min_atoms` and `max_atoms`
    /// distinct support points and weights `k/8`-style ratios.
    pub fn distribution(&self, rng: &mut impl Rng, min_atoms: usize) -> DiscreteMeasure {
        let target = rng.random_range(min_atoms.max(1)..=self.max_atoms.max(min_atoms.max(1)));
        let mut locations: Vec<f64> = Vec::with_capacity(target);
        let mut guard = 0;
        while locations.len() < target && guard < 1000 {
            let x = self.location(rng);
            if !locations.contains(&x) {
                locations.push(x);
            }
            guard += 1;
        }
        let counts: Vec<f64> = locations
            .iter()
            .map(|_| rng.random_range(1..=4) as f64)
            .collect();
        let total: f64 = counts.iter().sum();
        DiscreteMeasure::new(
            locations
                .into_iter()
                .zip(counts.into_iter().map(|c| c / total)),
        )
        .expect("positive weights")
    }

    /// A base measure `M·F`: random prior weight on a random distribution.
    pub fn measure(&self, rng: &mut impl Rng) -> DiscreteMeasure {
        let f = self.distribution(rng, 1);
        let mass = self.mass(rng);
        f.with_total_mass(mass).expect("positive mass")
    }

    /// An arbitrary nonnegative discount sequence (possibly irregular, with
    /// zeros).
    pub fn discount(&self, rng: &mut impl Rng, horizon: usize) -> DiscountSeq {
        match rng.random_range(0..4) {
            0 => DiscountSeq::uniform(horizon).expect("n >= 1"),
            1 => {
                let beta = rng.random_range(1..=7) as f64 / 8.0;
                DiscountSeq::truncated_geometric(beta, horizon).expect("beta in (0,1)")
            }
            _ => loop {
                let values: Vec<f64> = (0..horizon)
                    .map(|_| rng.random_range(0..=4) as f64 / 4.0)
                    .collect();
                if let Ok(seq) = DiscountSeq::new(values) {
                    break seq;
                }
            },
        }
    }

    /// A regular discount sequence with every weight positive.
    pub fn regular_positive_discount(&self, rng: &mut impl Rng, horizon: usize) -> DiscountSeq {
        match rng.random_range(0..3) {
            0 => DiscountSeq::uniform(horizon).expect("n >= 1"),
            1 => {
                let beta = rng.random_range(1..=7) as f64 / 8.0;
                DiscountSeq::truncated_geometric(beta, horizon).expect("beta in (0,1)")
            }
            _ => {
                for _ in 0..64 {
                    let mut values: Vec<f64> = (0..horizon)
                        .map(|_| rng.random_range(1..=8) as f64 / 4.0)
                        .collect();
                    values.sort_by(|a, b| b.total_cmp(a));
                    let seq = DiscountSeq::new(values).expect("positive");
                    if seq.is_regular() {
                        return seq;
                    }
                }
                DiscountSeq::uniform(horizon).expect("n >= 1")
            }
        }
    }
}

/// Knobs shared by every suite.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub gen: InstanceGen,
    pub trials: usize,
    pub mode: Arithmetic,
    /// Run trials on the rayon pool (sequential without the feature).
    pub parallel: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: usize) -> Self {
        Self {
            gen: InstanceGen::with_seed(seed),
            trials,
            mode: Arithmetic::Float,
            parallel: cfg!(feature = "parallel"),
        }
    }

    pub fn exact(mut self) -> Self {
        self.mode = Arithmetic::Exact;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn with_gen(mut self, gen: InstanceGen) -> Self {
        self.gen = gen;
        self
    }

    /// Inequality slack: `1e-9` in float mode, `0` in exact mode.
    pub fn slack(&self) -> f64 {
        match self.mode {
            Arithmetic::Float => 1e-9,
            Arithmetic::Exact => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub margin: f64,
}

/// Spread of observed strict gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    pub strict_margin: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
    /// Instance seeds whose gap fell below `strict_margin`, for review.
    pub below_margin: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub mode: Arithmetic,
    pub slack: f64,
    pub violations: Vec<Violation>,
    pub worst_margin: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gaps: Option<GapSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn table_row(&self) -> String {
        format!(
            "{:<11} {:>7} {:>6} {:>11} {:>17} {:>10.2}s  {}",
            self.suite,
            self.trials,
            self.violations.len(),
            self.slack,
            format_sig(self.worst_margin, 6),
            self.elapsed.as_secs_f64(),
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Human-readable summary table.
pub fn render_table(reports: &[SuiteReport]) -> String {
    let mut out = format!(
        "{:<11} {:>7} {:>6} {:>11} {:>17} {:>11}  {}\n",
        "suite", "trials", "viol", "slack", "worst_margin", "elapsed", "verdict"
    );
    for r in reports {
        out.push_str(&r.table_row());
        out.push('\n');
        if let Some(res) = r.max_residual {
            let _ = writeln!(out, "    max Λ residual {}", format_sig(res, 4));
        }
        if let Some(g) = &r.gaps {
            let _ = writeln!(
                out,
                "    gaps min {} median {} max {}; {} below {}",
                format_sig(g.min, 4),
                format_sig(g.median, 4),
                format_sig(g.max, 4),
                g.below_margin.len(),
                g.strict_margin
            );
        }
        for v in r.violations.iter().take(5) {
            let _ = writeln!(
                out,
                "    violation: instance seed {} margin {}",
                v.seed,
                format_sig(v.margin, 6)
            );
        }
        for n in &r.notes {
            let _ = writeln!(out, "    note: {n}");
        }
    }
    out
}

/// Reports of several suites as one JSON array.
pub fn reports_to_json(reports: &[SuiteReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..100).map(|i| split_seed(7, i)).collect();
        let b: Vec<u64> = (0..100).map(|i| split_seed(7, i)).collect();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 100);
        assert_ne!(split_seed(7, 0), split_seed(8, 0));
    }

    #[test]
    fn generated_instances_are_valid() {
        let gen = InstanceGen::default();
        for i in 0..200 {
            let mut rng = rng_for(split_seed(3, i));
            let f = gen.distribution(&mut rng, 2);
            assert!(f.len() >= 2 && f.len() <= 3);
            assert!(f.is_normalized());
            let m = gen.measure(&mut rng);
            assert!(*m.total_mass() >= 0.5 && *m.total_mass() <= 4.0);
            let n = gen.horizon(&mut rng, 2);
            assert!((2..=6).contains(&n));
            let a = gen.discount(&mut rng, n);
            assert_eq!(a.len(), n);
            let r = gen.regular_positive_discount(&mut rng, n);
            assert!(r.is_regular() && r.all_positive());
        }
    }
}
