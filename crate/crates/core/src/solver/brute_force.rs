//! Independent oracles for the value recursion.
//!
//! Neither routine touches the memoized engine: posteriors are rebuilt from
//! the raw root atoms and the full observation history at every node, and
//! all arithmetic is plain `f64`.

use super::{BanditState, SolveError};

/// Upper bound on history-tree nodes visited by [`brute_force_value`].
pub const BRUTE_FORCE_NODE_LIMIT: f64 = 2e7;
/// Upper bound on strategies materialized by [`enumerate_strategies_value`].
pub const STRATEGY_LIMIT: f64 = 2e6;

struct Tree {
    arms: [Vec<(f64, f64)>; 2],
    discount: Vec<f64>,
}

impl Tree {
    fn from_state(state: &BanditState<f64>) -> Self {
        Self {
            arms: [state.arm1.pairs().collect(), state.arm2.pairs().collect()],
            discount: state.discount.values().to_vec(),
        }
    }

    /// Predictive `(location, probability)` of `arm` given the history.
    fn predictive(&self, arm: usize, history: &[(usize, usize)]) -> Vec<(f64, f64)> {
        let root = &self.arms[arm];
        let mut weights: Vec<f64> = root.iter().map(|&(_, w)| w).collect();
        for &(a, slot) in history {
            if a == arm {
                weights[slot] += 1.0;
            }
        }
        let total: f64 = weights.iter().sum();
        root.iter()
            .zip(weights)
            .map(|(&(x, _), w)| (x, w / total))
            .collect()
    }

    fn history_nodes(&self) -> f64 {
        let branching = (self.arms[0].len() + self.arms[1].len()) as f64;
        (0..=self.discount.len())
            .map(|d| branching.powi(d as i32))
            .sum()
    }

    fn best(&self, history: &mut Vec<(usize, usize)>) -> f64 {
        let stage = history.len();
        if stage == self.discount.len() {
            return 0.0;
        }
        let a = self.discount[stage];
        let mut best = f64::NEG_INFINITY;
        for arm in 0..2 {
            let mut payoff = 0.0;
            for (slot, (x, p)) in self.predictive(arm, history).into_iter().enumerate() {
                history.push((arm, slot));
                payoff += p * (a * x + self.best(history));
                history.pop();
            }
            best = best.max(payoff);
        }
        best
    }

    fn strategy_count(&self, remaining: usize) -> f64 {
        if remaining == 0 {
            return 1.0;
        }
        let sub = self.strategy_count(remaining - 1);
        self.arms.iter().map(|a| sub.powi(a.len() as i32)).sum()
    }

    /// Payoffs of every deterministic strategy on the subtree at `history`.
    fn all_strategies(&self, history: &mut Vec<(usize, usize)>) -> Vec<f64> {
        let stage = history.len();
        if stage == self.discount.len() {
            return vec![0.0];
        }
        let a = self.discount[stage];
        let mut out = Vec::new();
        for arm in 0..2 {
            let pred = self.predictive(arm, history);
            // Cartesian product over the sub-strategies of each outcome.
            let mut partial = vec![0.0_f64];
            for (slot, &(x, p)) in pred.iter().enumerate() {
                history.push((arm, slot));
                let subs = self.all_strategies(history);
                history.pop();
                partial = partial
                    .iter()
                    .flat_map(|acc| subs.iter().map(move |s| acc + p * (a * x + s)))
                    .collect();
            }
            out.extend(partial);
        }
        out
    }
}

/// Maximum over all deterministic history-dependent strategies, computed on
/// the full (unmerged) observation-history tree. Decisions at distinct
/// histories are independent, so the maximum is taken node by node.
pub fn brute_force_value(state: &BanditState<f64>) -> Result<f64, SolveError> {
    let tree = Tree::from_state(state);
    let nodes = tree.history_nodes();
    if nodes > BRUTE_FORCE_NODE_LIMIT {
        return Err(SolveError::TooLarge {
            nodes,
            limit: BRUTE_FORCE_NODE_LIMIT,
        });
    }
    Ok(tree.best(&mut Vec::new()))
}

/// Literal enumeration: materializes the expected payoff of every
/// deterministic strategy and returns the largest. Only for tiny trees.
pub fn enumerate_strategies_value(state: &BanditState<f64>) -> Result<f64, SolveError> {
    let tree = Tree::from_state(state);
    let count = tree.strategy_count(tree.discount.len());
    if count > STRATEGY_LIMIT {
        return Err(SolveError::TooLarge {
            nodes: count,
            limit: STRATEGY_LIMIT,
        });
    }
    Ok(tree
        .all_strategies(&mut Vec::new())
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max))
}
