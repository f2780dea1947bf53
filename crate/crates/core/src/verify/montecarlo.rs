use rand::Rng;
use serde::Serialize;

use super::{rng_for, split_seed};
use crate::par;
use crate::solver::{BanditState, PolicyTable, SolveError, Solver, SolverOptions};

/// Trajectories per independently seeded block.
pub const MC_BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: usize,
}

/// Running mean and sum of squared deviations (Welford), merged across
/// blocks with Chan's update.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let delta = x - self.mean;
        self.mean += delta / self.n;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0.0 {
            return other;
        }
        if other.n == 0.0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        Moments {
            n,
            mean: if delta == 0.0 {
                self.mean
            } else {
                self.mean + delta * other.n / n
            },
            m2: self.m2 + other.m2 + delta * delta * self.n * other.n / n,
        }
    }
}

fn trajectory(policy: &PolicyTable<f64>, rng: &mut impl Rng) -> f64 {
    let discount = policy.discount();
    let mut counts = policy.root_counts();
    let mut payoff = 0.0;
    for stage in 0..discount.len() {
        let arm = policy
            .action(&counts)
            .expect("every reachable node is memoized")
            .pulled();
        let probs = policy.predictive(&counts, arm);
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut slot = probs.len() - 1;
        for (j, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                slot = j;
                break;
            }
        }
        payoff += discount.at(stage) * policy.locations(arm)[slot];
        counts[policy.slot_position(arm, slot)] += 1;
    }
    payoff
}

/// Plays the optimal policy of `state` for `trials` trajectories, drawing
/// each observation from the pulled arm's current predictive. Deterministic
/// given `seed`, independent of `parallel`.
pub fn simulate_policy(
    state: &BanditState<f64>,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<McEstimate, SolveError> {
    let policy = Solver::new(state, &SolverOptions::sequential()).into_policy()?;
    if state.discount.is_empty() || trials == 0 {
        return Ok(McEstimate {
            mean: 0.0,
            std_error: 0.0,
            trials,
        });
    }
    let blocks = trials.div_ceil(MC_BLOCK);
    let parts = par::map_indexed(blocks, parallel, |b| {
        let mut rng = rng_for(split_seed(seed, b as u64));
        let len = MC_BLOCK.min(trials - b * MC_BLOCK);
        let mut m = Moments::default();
        for _ in 0..len {
            m.push(trajectory(&policy, &mut rng));
        }
        m
    });
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let variance = if total.n > 1.0 {
        total.m2 / (total.n - 1.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean: total.mean,
        std_error: (variance.max(0.0) / total.n).sqrt(),
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discount::DiscountSeq;
    use crate::measure::DiscreteMeasure;

    #[test]
    fn known_arms_have_zero_error() {
        let a = DiscountSeq::uniform(3).unwrap();
        let state = BanditState::new(
            DiscreteMeasure::new([(0.2, 1.0)]).unwrap(),
            DiscreteMeasure::new([(0.7, 2.0)]).unwrap(),
            a.clone(),
        );
        let est = simulate_policy(&state, 1000, 5, true).unwrap();
        assert!((est.mean - 0.7 * 3.0).abs() < 1e-12);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn empty_horizon() {
        let state = BanditState::new(
            DiscreteMeasure::new([(0.2, 1.0)]).unwrap(),
            DiscreteMeasure::new([(0.7, 2.0)]).unwrap(),
            DiscountSeq::terminal(),
        );
        let est = simulate_policy(&state, 10, 5, false).unwrap();
        assert_eq!(est.mean, 0.0);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let state = BanditState::new(
            DiscreteMeasure::new([(0.0, 1.0), (1.0, 1.0)]).unwrap(),
            DiscreteMeasure::new([(0.5, 1.0)]).unwrap(),
            DiscountSeq::uniform(2).unwrap(),
        );
        let a = simulate_policy(&state, 20_000, 11, true).unwrap();
        let b = simulate_policy(&state, 20_000, 11, false).unwrap();
        assert_eq!(a, b);
        assert!((a.mean - 13.0 / 12.0).abs() <= 4.0 * a.std_error);
    }

    #[test]
    fn moments_merge_matches_direct() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..37].iter().for_each(|&x| a.push(x));
        xs[37..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert!((merged.mean - whole.mean).abs() < 1e-14);
        assert!((merged.m2 - whole.m2).abs() < 1e-12);
    }
}
