//! Exact finite-horizon solver for one- and two-armed bandits whose arms
//! carry Dirichlet-process priors with finitely supported base measures,
//! together with break-even indices and randomized property suites for
//! their monotonicity and convexity structure.

pub mod config;
pub mod discount;
pub mod index;
pub mod measure;
pub mod order;
pub mod par;
pub mod scalar;
pub mod solver;
pub mod verify;

pub use config::{ConfigError, InstanceConfig};
pub use discount::{DiscountError, DiscountSeq};
pub use measure::{Atom, DiscreteMeasure, MeasureError};
pub use order::{leq_cx, leq_icx, leq_st, mean_preserving_spread, stop_loss, OrderCheckResult};
pub use scalar::{Exact, Scalar};
pub use solver::{
    brute_force_value, policy_tree, value, value_one_armed, Action, Arithmetic, BanditState,
    SolveError, Solver, SolverOptions, StateKey, ValueReport,
};
