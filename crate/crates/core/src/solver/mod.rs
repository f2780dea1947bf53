//! Backward induction for the two-armed Dirichlet bandit.
//!
//! Every posterior reachable from a root `(α_1, α_2; A_n)` has the form
//! `α_i + Σ_j c_ij δ_{x_ij}`, where the `x_ij` are the root atoms of arm `i`
//! (observations are drawn from the predictive, whose support never
//! changes). A node is therefore identified by the integer count vector
//! `c`, and the number of consumed stages is `Σ c`. The value recursion
//!
//! ```text
//! W   = max(W¹, W²)
//! W¹  = a_1 μ_1 + E[ W(α_1 + δ_X, α_2; A¹) | α_1 ]
//! W²  = a_1 μ_2 + E[ W(α_1, α_2 + δ_Y; A¹) | α_2 ]
//! ```
//!
//! is evaluated depth-first and memoized on those count vectors.

mod brute_force;
mod policy;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

pub use brute_force::{brute_force_value, enumerate_strategies_value, BRUTE_FORCE_NODE_LIMIT};
pub use policy::{policy_tree, PolicyBranch, PolicyNode};

use crate::discount::DiscountSeq;
use crate::measure::DiscreteMeasure;
use crate::scalar::Scalar;

/// Default cap on memoized nodes.
pub const DEFAULT_MEMO_CAP: usize = 50_000_000;
/// Default `|W¹ - W²|` below which both arms are reported optimal.
pub const DEFAULT_TIE_TOL: f64 = 1e-11;
/// Remaining stages at which the parallel engine stops forking.
#[cfg(feature = "parallel")]
const PAR_MIN_REMAINING: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("memo table exceeded its cap of {cap} entries")]
    ResourceBudgetExceeded { cap: usize },
    #[error("instance too large for exhaustive search ({nodes} history nodes, limit {limit})")]
    TooLarge { nodes: f64, limit: f64 },
    #[error("policy depth {depth} exceeds horizon {horizon}")]
    DepthExceedsHorizon { depth: usize, horizon: usize },
}

/// `(α_1, α_2; A_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditState<S = f64> {
    pub arm1: DiscreteMeasure<S>,
    pub arm2: DiscreteMeasure<S>,
    pub discount: DiscountSeq<S>,
}

impl<S: Scalar> BanditState<S> {
    pub fn new(
        arm1: DiscreteMeasure<S>,
        arm2: DiscreteMeasure<S>,
        discount: DiscountSeq<S>,
    ) -> Self {
        Self {
            arm1,
            arm2,
            discount,
        }
    }

    pub fn horizon(&self) -> usize {
        self.discount.len()
    }

    pub fn swapped(&self) -> Self {
        Self::new(self.arm2.clone(), self.arm1.clone(), self.discount.clone())
    }

    pub fn to_f64(&self) -> BanditState<f64> {
        BanditState::new(
            self.arm1.to_f64(),
            self.arm2.to_f64(),
            self.discount.to_f64(),
        )
    }
}

impl BanditState<f64> {
    pub fn cast<S: Scalar>(&self) -> BanditState<S> {
        BanditState::new(self.arm1.cast(), self.arm2.cast(), self.discount.cast())
    }

    pub fn to_exact(&self) -> BanditState<crate::scalar::Exact> {
        self.cast()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Arm {
    One,
    Two,
}

impl Arm {
    fn index(self) -> usize {
        match self {
            Arm::One => 0,
            Arm::Two => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Action {
    Arm1,
    Arm2,
    Tie,
}

impl Action {
    /// The arm actually pulled; ties go to arm 1.
    pub fn pulled(self) -> Arm {
        match self {
            Action::Arm1 | Action::Tie => Arm::One,
            Action::Arm2 => Arm::Two,
        }
    }
}

impl std::fmt::Display for Action {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Action::Arm1 => "arm1",
            Action::Arm2 => "arm2",
            Action::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueReport<S = f64> {
    pub w: S,
    pub w1: S,
    pub w2: S,
    pub action: Action,
}

impl<S: Scalar> ValueReport<S> {
    fn terminal() -> Self {
        Self {
            w: S::zero(),
            w1: S::zero(),
            w2: S::zero(),
            action: Action::Tie,
        }
    }

    fn from_branches(w1: S, w2: S, tie_tol: f64) -> Self {
        let action = if w1.within(&w2, tie_tol) {
            Action::Tie
        } else if w1 > w2 {
            Action::Arm1
        } else {
            Action::Arm2
        };
        let w = S::max_of(w1.clone(), w2.clone());
        Self { w, w1, w2, action }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Float,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Selects the backend at the front ends; the generic API follows `S`.
    pub mode: Arithmetic,
    pub tie_tol: f64,
    pub memo_cap: usize,
    /// Evaluate sibling subtrees on the rayon pool (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            mode: Arithmetic::Float,
            tie_tol: DEFAULT_TIE_TOL,
            memo_cap: DEFAULT_MEMO_CAP,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl SolverOptions {
    pub fn sequential() -> Self {
        Self {
            parallel: false,
            ..Self::default()
        }
    }
}

/// Identifies a node reachable from a root instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateKey {
    pub base_id: u64,
    /// Observations added to each root atom of arm 1.
    pub counts1: Vec<u32>,
    pub counts2: Vec<u32>,
    /// Discounts consumed so far; equals the total count.
    pub stage: usize,
}

type FlatKey = Vec<u16>;

#[derive(Debug, Clone)]
struct ArmSlots<S> {
    locations: Vec<S>,
    weights: Vec<S>,
    mass: S,
}

impl<S: Scalar> ArmSlots<S> {
    fn new(m: &DiscreteMeasure<S>) -> Self {
        Self {
            locations: m.atoms().iter().map(|a| a.location.clone()).collect(),
            weights: m.atoms().iter().map(|a| a.weight.clone()).collect(),
            mass: m.total_mass().clone(),
        }
    }
}

/// Immutable description of the recursion shared by both engines.
#[derive(Debug, Clone)]
struct Problem<S> {
    arms: [ArmSlots<S>; 2],
    discount: DiscountSeq<S>,
    /// When set, arm 2 is the known arm `δ_λ` and choosing it stops:
    /// `W² = λ · T_stage`.
    stop_value: Option<S>,
    tie_tol: f64,
    base_id: u64,
}

impl<S: Scalar> Problem<S> {
    fn new(state: &BanditState<S>, stop_value: Option<S>, tie_tol: f64) -> Self {
        let mut hasher = DefaultHasher::new();
        format!(
            "{:?}|{:?}|{:?}",
            state.arm1,
            state.arm2,
            state.discount.values()
        )
        .hash(&mut hasher);
        stop_value
            .as_ref()
            .map(|v| format!("{v:?}"))
            .hash(&mut hasher);
        Self {
            arms: [ArmSlots::new(&state.arm1), ArmSlots::new(&state.arm2)],
            discount: state.discount.clone(),
            stop_value,
            tie_tol,
            base_id: hasher.finish(),
        }
    }

    fn horizon(&self) -> usize {
        self.discount.len()
    }

    fn offset(&self, arm: Arm) -> usize {
        match arm {
            Arm::One => 0,
            Arm::Two => self.arms[0].locations.len(),
        }
    }

    fn key_len(&self) -> usize {
        self.arms[0].locations.len() + self.arms[1].locations.len()
    }

    fn stage_of(key: &[u16]) -> usize {
        key.iter().map(|&c| c as usize).sum()
    }

    /// Predictive probabilities and the predictive mean of `arm` at `key`.
    fn predictive(&self, key: &[u16], arm: Arm) -> (Vec<S>, S) {
        let slots = &self.arms[arm.index()];
        let off = self.offset(arm);
        let counts = &key[off..off + slots.locations.len()];
        let added: u64 = counts.iter().map(|&c| c as u64).sum();
        let total = slots.mass.clone() + S::from_i64(added as i64);
        let probs: Vec<S> = slots
            .weights
            .iter()
            .zip(counts)
            .map(|(w, &c)| (w.clone() + S::from_i64(c as i64)) / total.clone())
            .collect();
        let mean = S::sum(
            probs
                .iter()
                .zip(&slots.locations)
                .map(|(p, x)| p.clone() * x.clone()),
        );
        (probs, mean)
    }

    fn stops_on(&self, arm: Arm) -> Option<&S> {
        match arm {
            Arm::Two => self.stop_value.as_ref(),
            Arm::One => None,
        }
    }

    fn to_state_key(&self, key: &[u16]) -> StateKey {
        let split = self.arms[0].locations.len();
        StateKey {
            base_id: self.base_id,
            counts1: key[..split].iter().map(|&c| c as u32).collect(),
            counts2: key[split..].iter().map(|&c| c as u32).collect(),
            stage: Self::stage_of(key),
        }
    }

    fn flat_key(&self, key: &StateKey) -> FlatKey {
        key.counts1
            .iter()
            .chain(&key.counts2)
            .map(|&c| c as u16)
            .collect()
    }
}

enum Memo<S> {
    Local(HashMap<FlatKey, ValueReport<S>>),
    #[cfg(feature = "parallel")]
    Shared(dashmap::DashMap<FlatKey, ValueReport<S>>),
}

impl<S> Memo<S> {
    fn len(&self) -> usize {
        match self {
            Memo::Local(m) => m.len(),
            #[cfg(feature = "parallel")]
            Memo::Shared(m) => m.len(),
        }
    }
}

/// A solver bound to one root instance; keeps its memo table between
/// queries so that policy lookups after [`Solver::solve`] are free.
pub struct Solver<S: Scalar = f64> {
    problem: Problem<S>,
    memo: Memo<S>,
    memo_cap: usize,
}

impl<S: Scalar> Solver<S> {
    pub fn new(state: &BanditState<S>, opts: &SolverOptions) -> Self {
        Self::with_problem(Problem::new(state, None, opts.tie_tol), opts)
    }

    /// The `(arm, δ_λ; A)` bandit. With a regular `A` the known arm is
    /// absorbing, so choosing it is evaluated as `λ · T` without recursion.
    pub fn one_armed(
        arm: &DiscreteMeasure<S>,
        lambda: S,
        discount: &DiscountSeq<S>,
        opts: &SolverOptions,
    ) -> Self {
        let known = DiscreteMeasure::point_mass(lambda.clone(), S::one()).expect("unit weight");
        let state = BanditState::new(arm.clone(), known, discount.clone());
        let stop = (!discount.is_empty() && discount.is_regular()).then_some(lambda);
        Self::with_problem(Problem::new(&state, stop, opts.tie_tol), opts)
    }

    fn with_problem(problem: Problem<S>, opts: &SolverOptions) -> Self {
        let memo = if opts.parallel {
            #[cfg(feature = "parallel")]
            {
                Memo::Shared(dashmap::DashMap::new())
            }
            #[cfg(not(feature = "parallel"))]
            {
                Memo::Local(HashMap::new())
            }
        } else {
            Memo::Local(HashMap::new())
        };
        Self {
            problem,
            memo,
            memo_cap: opts.memo_cap,
        }
    }

    pub fn horizon(&self) -> usize {
        self.problem.horizon()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Whether choosing arm 2 is treated as stopping.
    pub fn is_pruned(&self) -> bool {
        self.problem.stop_value.is_some()
    }

    pub fn root_key(&self) -> StateKey {
        self.problem.to_state_key(&vec![0; self.problem.key_len()])
    }

    pub fn solve(&mut self) -> Result<ValueReport<S>, SolveError> {
        let root = self.problem.to_state_key(&vec![0; self.problem.key_len()]);
        self.report(&root)
    }

    /// The report at any node reachable from the root.
    pub fn report(&mut self, key: &StateKey) -> Result<ValueReport<S>, SolveError> {
        let flat = self.problem.flat_key(key);
        let cap = self.memo_cap;
        match &mut self.memo {
            Memo::Local(memo) => {
                let mut flat = flat;
                eval_local(&self.problem, memo, &mut flat, cap)
            }
            #[cfg(feature = "parallel")]
            Memo::Shared(memo) => eval_shared(&self.problem, memo, flat, cap),
        }
    }

    /// Root atom locations of `arm`, indexed by slot.
    pub fn locations(&self, arm: Arm) -> &[S] {
        &self.problem.arms[arm.index()].locations
    }

    /// Predictive probabilities of `arm`'s slots at `key`.
    pub fn predictive_at(&self, key: &StateKey, arm: Arm) -> Vec<S> {
        self.problem.predictive(&self.problem.flat_key(key), arm).0
    }

    /// Key after observing slot `slot` of `arm` at `key`.
    pub fn child_key(&self, key: &StateKey, arm: Arm, slot: usize) -> StateKey {
        let mut next = key.clone();
        match arm {
            Arm::One => next.counts1[slot] += 1,
            Arm::Two => next.counts2[slot] += 1,
        }
        next.stage += 1;
        next
    }

    /// Whether pulling `arm` at `key` stops the recursion (pruned known arm).
    pub fn stops_on(&self, arm: Arm) -> bool {
        self.problem.stops_on(arm).is_some()
    }
}

/// Read-only snapshot of the optimal action at every memoized node; safe
/// to share across threads. Nodes are addressed by the concatenated slot
/// counts (arm 1 slots, then arm 2 slots).
pub struct PolicyTable<S: Scalar = f64> {
    problem: Problem<S>,
    actions: HashMap<FlatKey, Action>,
}

impl<S: Scalar> Solver<S> {
    /// Solves the root and freezes the resulting policy.
    pub fn into_policy(mut self) -> Result<PolicyTable<S>, SolveError> {
        self.solve()?;
        let actions = match self.memo {
            Memo::Local(m) => m.into_iter().map(|(k, v)| (k, v.action)).collect(),
            #[cfg(feature = "parallel")]
            Memo::Shared(m) => m.into_iter().map(|(k, v)| (k, v.action)).collect(),
        };
        Ok(PolicyTable {
            problem: self.problem,
            actions,
        })
    }
}

impl<S: Scalar> PolicyTable<S> {
    pub fn root_counts(&self) -> Vec<u16> {
        vec![0; self.problem.key_len()]
    }

    pub fn discount(&self) -> &DiscountSeq<S> {
        &self.problem.discount
    }

    /// Optimal action at a non-terminal node reachable from the root.
    pub fn action(&self, counts: &[u16]) -> Option<Action> {
        self.actions.get(counts).copied()
    }

    pub fn predictive(&self, counts: &[u16], arm: Arm) -> Vec<S> {
        self.problem.predictive(counts, arm).0
    }

    pub fn locations(&self, arm: Arm) -> &[S] {
        &self.problem.arms[arm.index()].locations
    }

    /// Position of `arm`'s `slot` in the count vector.
    pub fn slot_position(&self, arm: Arm, slot: usize) -> usize {
        self.problem.offset(arm) + slot
    }
}

fn cap_check(len: usize, cap: usize) -> Result<(), SolveError> {
    if len >= cap {
        Err(SolveError::ResourceBudgetExceeded { cap })
    } else {
        Ok(())
    }
}

fn eval_local<S: Scalar>(
    problem: &Problem<S>,
    memo: &mut HashMap<FlatKey, ValueReport<S>>,
    key: &mut FlatKey,
    cap: usize,
) -> Result<ValueReport<S>, SolveError> {
    let stage = Problem::<S>::stage_of(key);
    if stage >= problem.horizon() {
        return Ok(ValueReport::terminal());
    }
    if let Some(hit) = memo.get(key.as_slice()) {
        return Ok(hit.clone());
    }
    let a = problem.discount.at(stage).clone();
    let mut branch = [S::zero(), S::zero()];
    for arm in [Arm::One, Arm::Two] {
        branch[arm.index()] = if let Some(lambda) = problem.stops_on(arm) {
            lambda.clone() * problem.discount.tail(stage).clone()
        } else {
            let (probs, mean) = problem.predictive(key, arm);
            let off = problem.offset(arm);
            let mut terms = Vec::with_capacity(probs.len());
            for (j, p) in probs.into_iter().enumerate() {
                key[off + j] += 1;
                let child = eval_local(problem, memo, key, cap);
                key[off + j] -= 1;
                terms.push(p * child?.w);
            }
            a.clone() * mean + S::sum(terms)
        };
    }
    let [w1, w2] = branch;
    let report = ValueReport::from_branches(w1, w2, problem.tie_tol);
    cap_check(memo.len(), cap)?;
    memo.insert(key.clone(), report.clone());
    Ok(report)
}

#[cfg(feature = "parallel")]
fn eval_shared<S: Scalar>(
    problem: &Problem<S>,
    memo: &dashmap::DashMap<FlatKey, ValueReport<S>>,
    key: FlatKey,
    cap: usize,
) -> Result<ValueReport<S>, SolveError> {
    use rayon::prelude::*;

    let stage = Problem::<S>::stage_of(&key);
    let horizon = problem.horizon();
    if stage >= horizon {
        return Ok(ValueReport::terminal());
    }
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.value().clone());
    }
    let fork = horizon - stage >= PAR_MIN_REMAINING;
    let a = problem.discount.at(stage).clone();
    let arm_value = |arm: Arm| -> Result<S, SolveError> {
        if let Some(lambda) = problem.stops_on(arm) {
            return Ok(lambda.clone() * problem.discount.tail(stage).clone());
        }
        let (probs, mean) = problem.predictive(&key, arm);
        let off = problem.offset(arm);
        let child = |j: usize| {
            let mut next = key.clone();
            next[off + j] += 1;
            eval_shared(problem, memo, next, cap)
        };
        let children: Vec<ValueReport<S>> = if fork {
            (0..probs.len())
                .into_par_iter()
                .map(child)
                .collect::<Result<_, _>>()?
        } else {
            (0..probs.len()).map(child).collect::<Result<_, _>>()?
        };
        let cont = S::sum(probs.into_iter().zip(children).map(|(p, c)| p * c.w));
        Ok(a.clone() * mean + cont)
    };
    let (w1, w2) = if fork {
        let (w1, w2) = rayon::join(|| arm_value(Arm::One), || arm_value(Arm::Two));
        (w1?, w2?)
    } else {
        (arm_value(Arm::One)?, arm_value(Arm::Two)?)
    };
    let report = ValueReport::from_branches(w1, w2, problem.tie_tol);
    cap_check(memo.len(), cap)?;
    // Concurrent inserts of the same key carry identical values.
    memo.insert(key, report.clone());
    Ok(report)
}

/// Maximum expected payoff `W` with both branch values and the optimal
/// first action.
pub fn value<S: Scalar>(
    state: &BanditState<S>,
    opts: &SolverOptions,
) -> Result<ValueReport<S>, SolveError> {
    Solver::new(state, opts).solve()
}

/// `W(arm, δ_λ; A)`, pruned by the optimal-stopping structure when `A` is
/// regular. In the pruned case `w2` is the stopping value `λ · T_1`, which
/// equals the unpruned `W²` whenever arm 2 is optimal initially.
pub fn value_one_armed<S: Scalar>(
    arm: &DiscreteMeasure<S>,
    lambda: S,
    discount: &DiscountSeq<S>,
    opts: &SolverOptions,
) -> Result<ValueReport<S>, SolveError> {
    Solver::one_armed(arm, lambda, discount, opts).solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn m(pairs: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(pairs.iter().copied()).unwrap()
    }

    fn seq(v: &[f64]) -> DiscountSeq {
        DiscountSeq::new(v.to_vec()).unwrap()
    }

    fn coin_instance() -> BanditState {
        BanditState::new(
            m(&[(0.0, 1.0), (1.0, 1.0)]),
            m(&[(0.5, 1.0)]),
            seq(&[1.0, 1.0]),
        )
    }

    #[test]
    fn one_stage() {
        let state = BanditState::new(m(&[(0.0, 1.0), (1.0, 1.0)]), m(&[(0.7, 1.0)]), seq(&[2.0]));
        let r = value(&state, &SolverOptions::default()).unwrap();
        assert!((r.w - 1.4).abs() < 1e-15);
        assert_eq!(r.action, Action::Arm2);
    }

    #[test]
    fn two_stage_coin_instance() {
        for opts in [SolverOptions::sequential(), SolverOptions::default()] {
            let r = value(&coin_instance(), &opts).unwrap();
            assert!((r.w - 13.0 / 12.0).abs() < 1e-15);
            assert!((r.w1 - 13.0 / 12.0).abs() < 1e-15);
            assert!((r.w2 - 1.0).abs() < 1e-15);
            assert_eq!(r.action, Action::Arm1);
        }
    }

    #[test]
    fn two_stage_coin_instance_exact() {
        let r = value(&coin_instance().to_exact(), &SolverOptions::sequential()).unwrap();
        assert_eq!(r.w, Exact::parse_number("13/12").unwrap());
        assert_eq!(r.w2, Exact::one());
    }

    #[test]
    fn known_arms() {
        let a = seq(&[1.0, 0.5, 0.25]);
        let state = BanditState::new(m(&[(0.3, 2.0)]), m(&[(0.8, 5.0)]), a.clone());
        let r = value(&state, &SolverOptions::default()).unwrap();
        assert!((r.w - 0.8 * a.total()).abs() < 1e-15);
        assert_eq!(r.action, Action::Arm2);
    }

    #[test]
    fn empty_horizon_is_zero() {
        let state = BanditState::new(m(&[(0.3, 2.0)]), m(&[(0.8, 5.0)]), DiscountSeq::terminal());
        let r = value(&state, &SolverOptions::default()).unwrap();
        assert_eq!(r.w, 0.0);
    }

    #[test]
    fn one_armed_examples() {
        let arm = m(&[(0.0, 1.0), (1.0, 1.0)]);
        let a = seq(&[1.0, 1.0]);
        let opts = SolverOptions::default();
        let r = value_one_armed(&arm, 0.5, &a, &opts).unwrap();
        assert!((r.w - 13.0 / 12.0).abs() < 1e-15);
        let hi = value_one_armed(&arm, 1.2, &a, &opts).unwrap();
        assert_eq!(hi.w, 1.2 * 2.0);
        assert_eq!(hi.action, Action::Arm2);
        let lo = value_one_armed(&arm, -0.5, &a, &opts).unwrap();
        assert!((lo.w - 0.5 * 2.0).abs() < 1e-15);
        assert_eq!(lo.action, Action::Arm1);
    }

    #[test]
    fn zero_discounts_still_consume_stages() {
        // An information-only first pull: a_1 = 0.
        let state = BanditState::new(
            m(&[(0.0, 1.0), (1.0, 1.0)]),
            m(&[(0.6, 1.0)]),
            seq(&[0.0, 1.0]),
        );
        let r = value(&state, &SolverOptions::default()).unwrap();
        // Arm 1 first: 0 + ½·max(2/3, .6) + ½·max(1/3, .6) = 0.6333…
        assert!((r.w1 - (0.5 * (2.0 / 3.0) + 0.5 * 0.6)).abs() < 1e-15);
        assert!((r.w2 - 0.6).abs() < 1e-15);
        assert_eq!(r.action, Action::Arm1);
    }

    #[test]
    fn memo_cap_is_enforced() {
        let state = BanditState::new(
            m(&[(0.0, 1.0), (1.0, 1.0)]),
            m(&[(0.0, 1.0), (1.0, 1.0)]),
            seq(&[1.0; 6]),
        );
        let opts = SolverOptions {
            memo_cap: 5,
            ..SolverOptions::sequential()
        };
        assert_eq!(
            value(&state, &opts),
            Err(SolveError::ResourceBudgetExceeded { cap: 5 })
        );
        #[cfg(feature = "parallel")]
        {
            let par = SolverOptions {
                memo_cap: 5,
                parallel: true,
                ..SolverOptions::default()
            };
            assert!(matches!(
                value(&state, &par),
                Err(SolveError::ResourceBudgetExceeded { .. })
            ));
        }
    }

    #[test]
    fn tie_on_identical_arms() {
        let arm = m(&[(0.0, 1.0), (1.0, 2.0)]);
        let state = BanditState::new(arm.clone(), arm, seq(&[1.0, 1.0, 1.0]));
        let r = value(&state, &SolverOptions::default()).unwrap();
        assert_eq!(r.action, Action::Tie);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let state = BanditState::new(
            m(&[(0.0, 0.5), (0.5, 1.0), (1.0, 0.75)]),
            m(&[(0.25, 1.0), (0.75, 1.5)]),
            seq(&[1.0; 7]),
        );
        let seq_r = value(&state, &SolverOptions::sequential()).unwrap();
        let par_r = value(&state, &SolverOptions::default()).unwrap();
        assert_eq!(seq_r, par_r);
    }
}
