use super::{Action, Arm, BanditState, SolveError, Solver, SolverOptions, StateKey, ValueReport};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyBranch<S = f64> {
    pub arm: Arm,
    pub location: S,
    pub probability: S,
    pub child: PolicyNode<S>,
}

/// One node of the optimal policy. Branches enumerate the predictive
/// support of the pulled arm (arm 1 on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyNode<S = f64> {
    pub key: StateKey,
    pub action: Action,
    pub report: ValueReport<S>,
    pub branches: Vec<PolicyBranch<S>>,
}

impl<S: Scalar> PolicyNode<S> {
    /// Visits every node, parents before children.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a PolicyNode<S>)) {
        visit(self);
        for b in &self.branches {
            b.child.walk(visit);
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out, 0, None);
        out
    }

    fn render_into(&self, out: &mut String, indent: usize, label: Option<(&S, &S)>) {
        let pad = "  ".repeat(indent);
        let prefix = match label {
            Some((x, p)) => format!("x={x} (p={p}) -> "),
            None => String::new(),
        };
        out.push_str(&format!(
            "{pad}{prefix}stage {} {:?}/{:?}: {} (W={})\n",
            self.key.stage, self.key.counts1, self.key.counts2, self.action, self.report.w
        ));
        for b in &self.branches {
            b.child
                .render_into(out, indent + 1, Some((&b.location, &b.probability)));
        }
    }
}

impl<S: Scalar> Solver<S> {
    /// The optimal policy unrolled `depth` stages from the root.
    pub fn policy_tree(&mut self, depth: usize) -> Result<PolicyNode<S>, SolveError> {
        let horizon = self.horizon();
        if depth > horizon {
            return Err(SolveError::DepthExceedsHorizon { depth, horizon });
        }
        let root = self.root_key();
        self.policy_node(root, depth)
    }

    fn policy_node(&mut self, key: StateKey, depth: usize) -> Result<PolicyNode<S>, SolveError> {
        let report = self.report(&key)?;
        let action = report.action;
        let mut branches = Vec::new();
        if depth > 0 && key.stage < self.horizon() {
            let arm = action.pulled();
            if !self.stops_on(arm) {
                let probs = self.predictive_at(&key, arm);
                let locations = self.locations(arm).to_vec();
                for (slot, (location, probability)) in locations.into_iter().zip(probs).enumerate()
                {
                    let child_key = self.child_key(&key, arm, slot);
                    let child = self.policy_node(child_key, depth - 1)?;
                    branches.push(PolicyBranch {
                        arm,
                        location,
                        probability,
                        child,
                    });
                }
            }
        }
        Ok(PolicyNode {
            key,
            action,
            report,
            branches,
        })
    }
}

/// Unrolls the optimal policy of `state` to `depth` stages.
pub fn policy_tree<S: Scalar>(
    state: &BanditState<S>,
    depth: usize,
    opts: &SolverOptions,
) -> Result<PolicyNode<S>, SolveError> {
    Solver::new(state, opts).policy_tree(depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discount::DiscountSeq;
    use crate::measure::DiscreteMeasure;

    fn m(pairs: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn coin_instance_root() {
        let state = BanditState::new(
            m(&[(0.0, 1.0), (1.0, 1.0)]),
            m(&[(0.5, 1.0)]),
            DiscountSeq::uniform(2).unwrap(),
        );
        let tree = policy_tree(&state, 1, &SolverOptions::default()).unwrap();
        assert_eq!(tree.action, Action::Arm1);
        assert_eq!(tree.branches.len(), 2);
        let after_zero = &tree.branches[0].child;
        assert_eq!(after_zero.action, Action::Arm2);
        let after_one = &tree.branches[1].child;
        assert_eq!(after_one.action, Action::Arm1);
        assert!(after_one.branches.is_empty());
    }

    #[test]
    fn known_arms_give_constant_policy() {
        let state = BanditState::new(
            m(&[(0.3, 1.0)]),
            m(&[(0.6, 2.0)]),
            DiscountSeq::uniform(4).unwrap(),
        );
        let tree = policy_tree(&state, 4, &SolverOptions::default()).unwrap();
        let mut actions = Vec::new();
        tree.walk(&mut |n| {
            if n.key.stage < 4 {
                actions.push(n.action)
            }
        });
        assert_eq!(actions.len(), 4);
        assert!(actions.iter().all(|&a| a == Action::Arm2));
    }

    #[test]
    fn symmetric_instance_ties() {
        let arm = m(&[(0.0, 1.0), (1.0, 1.0)]);
        let state = BanditState::new(arm.clone(), arm, DiscountSeq::uniform(3).unwrap());
        let tree = policy_tree(&state, 1, &SolverOptions::default()).unwrap();
        assert_eq!(tree.action, Action::Tie);
        assert!(tree.branches.iter().all(|b| b.arm == Arm::One));
    }

    #[test]
    fn node_actions_agree_with_value() {
        let state = BanditState::new(
            m(&[(0.0, 1.0), (0.5, 0.5), (1.0, 1.0)]),
            m(&[(0.25, 1.0), (0.75, 1.0)]),
            DiscountSeq::uniform(4).unwrap(),
        );
        let opts = SolverOptions::default();
        let tree = policy_tree(&state, 4, &opts).unwrap();
        let mut checked = 0;
        tree.walk(&mut |node| {
            // Rebuild the node's posterior directly and re-solve from scratch.
            let mut arm1 = state.arm1.clone();
            for (slot, &c) in node.key.counts1.iter().enumerate() {
                for _ in 0..c {
                    arm1 = arm1.posterior_update(state.arm1.atoms()[slot].location);
                }
            }
            let mut arm2 = state.arm2.clone();
            for (slot, &c) in node.key.counts2.iter().enumerate() {
                for _ in 0..c {
                    arm2 = arm2.posterior_update(state.arm2.atoms()[slot].location);
                }
            }
            let mut rest = state.discount.clone();
            for _ in 0..node.key.stage {
                rest = rest.drop_first();
            }
            let sub = super::super::value(&BanditState::new(arm1, arm2, rest), &opts).unwrap();
            assert!((sub.w - node.report.w).abs() < 1e-12);
            assert_eq!(sub.action, node.action);
            checked += 1;
        });
        assert!(checked > 10);
    }

    #[test]
    fn depth_beyond_horizon_errors() {
        let state = BanditState::new(
            m(&[(0.3, 1.0)]),
            m(&[(0.6, 2.0)]),
            DiscountSeq::uniform(2).unwrap(),
        );
        assert_eq!(
            policy_tree(&state, 3, &SolverOptions::default()),
            Err(SolveError::DepthExceedsHorizon {
                depth: 3,
                horizon: 2
            })
        );
    }
}
