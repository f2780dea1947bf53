//! Break-even quantities of the one-armed bandit `(α, δ_λ; A_n)`.
//!
//! With a regular discount sequence the known arm is absorbing, and the
//! break-even value `Λ(α; A_n)` is the smallest `λ` with
//! `W(α, δ_λ; A_n) ≤ λ·T_1`. The break-even observation `b(α; A_n)` is the
//! first observation `x` after which `Λ(α + δ_x; A¹) ≥ Λ(α; A_n)`.
//! Both are found by bisection; each probe is a full backward induction.

use std::fmt::Write as _;

use crate::discount::DiscountSeq;
use crate::measure::{DiscreteMeasure, MeasureError};
use crate::par;
use crate::scalar::format_sig;
use crate::solver::{value, value_one_armed, BanditState, SolveError, SolverOptions};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
/// Slack before an adjacent sweep pair is flagged as out of order.
pub const SWEEP_FLAG_TOL: f64 = 1e-8;
const MAX_EXPANSIONS: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IndexError {
    #[error("discount sequence is not regular; the break-even value is undefined")]
    NotRegular,
    #[error("discount sequence has zero total weight")]
    DegenerateHorizon,
    #[error("first discount weight is zero")]
    ZeroLeadingDiscount,
    #[error("break-even observation needs all discount weights positive")]
    NonPositiveDiscount,
    #[error("break-even observation needs a horizon of at least 2")]
    HorizonTooShort,
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("no sign change found while bracketing")]
    BracketNotFound,
    #[error("residual {residual:e} exceeds {tol:e}")]
    ResidualExceeded { residual: f64, tol: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexOptions {
    pub tol: f64,
    pub residual_tol: f64,
    pub solver: SolverOptions,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            solver: SolverOptions::default(),
        }
    }
}

impl IndexOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexResult {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// `|W(α, δ_Λ; A) - Λ·T_1|` for `Λ`, `|Λ(α + δ_b; A¹) - Λ(α; A)|` for `b`.
    pub residual: f64,
    /// Set when the bracketing probes of `b` were not monotone.
    pub nonmonotone: bool,
}

fn check_tol(tol: f64) -> Result<(), IndexError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(IndexError::InvalidTolerance)
    }
}

fn check_discount(discount: &DiscountSeq) -> Result<(), IndexError> {
    if discount.is_empty() || discount.total() <= 0.0 {
        return Err(IndexError::DegenerateHorizon);
    }
    if !discount.is_regular() {
        return Err(IndexError::NotRegular);
    }
    if *discount.at(0) <= 0.0 {
        return Err(IndexError::ZeroLeadingDiscount);
    }
    Ok(())
}

/// Whether the known arm paying `lambda` is optimal initially.
fn known_arm_optimal(
    arm: &DiscreteMeasure,
    lambda: f64,
    discount: &DiscountSeq,
    solver: &SolverOptions,
) -> Result<bool, SolveError> {
    let r = value_one_armed(arm, lambda, discount, solver)?;
    Ok(r.w1 <= r.w2)
}

struct Bisection {
    value: f64,
    low: f64,
    high: f64,
    iterations: usize,
}

fn bisect_lambda(
    arm: &DiscreteMeasure,
    discount: &DiscountSeq,
    tol: f64,
    solver: &SolverOptions,
) -> Result<Bisection, IndexError> {
    let mut low = arm.mean();
    let mut high = *arm.max_location();
    let mut iterations = 0;
    if known_arm_optimal(arm, low, discount, solver)? {
        return Ok(Bisection {
            value: low,
            low,
            high: low,
            iterations,
        });
    }
    while high - low > tol {
        let mid = 0.5 * (low + high);
        if mid <= low || mid >= high {
            break;
        }
        iterations += 1;
        if known_arm_optimal(arm, mid, discount, solver)? {
            high = mid;
        } else {
            low = mid;
        }
    }
    Ok(Bisection {
        value: high,
        low,
        high,
        iterations,
    })
}

/// `Λ(α; A_n)`: bisection on `λ ↦ W(α, δ_λ; A) - λ·T_1` over
/// `[mean(α), max atom]`. The residual is evaluated with the unpruned
/// two-armed recursion.
pub fn break_even_value(
    arm: &DiscreteMeasure,
    discount: &DiscountSeq,
    opts: &IndexOptions,
) -> Result<IndexResult, IndexError> {
    check_tol(opts.tol)?;
    check_discount(discount)?;
    let b = bisect_lambda(arm, discount, opts.tol, &opts.solver)?;
    let known = DiscreteMeasure::point_mass(b.value, 1.0)?;
    let full = value(
        &BanditState::new(arm.clone(), known, discount.clone()),
        &opts.solver,
    )?;
    let residual = (full.w - b.value * discount.total()).abs();
    if residual > opts.residual_tol {
        return Err(IndexError::ResidualExceeded {
            residual,
            tol: opts.residual_tol,
        });
    }
    Ok(IndexResult {
        value: b.value,
        bracket: (b.low, b.high),
        iterations: b.iterations,
        residual,
        nonmonotone: false,
    })
}

/// `b(α; A_n)`: the lowest `x` with `Λ(α + δ_x; A¹) ≥ Λ(α; A_n)`.
///
/// The search starts from `[Λ(α; A_n), max atom]` and grows the bracket in
/// either direction (doubling steps) until the comparison changes sign, so
/// the result is not forced to lie above `Λ`.
pub fn break_even_observation(
    arm: &DiscreteMeasure,
    discount: &DiscountSeq,
    opts: &IndexOptions,
) -> Result<IndexResult, IndexError> {
    check_tol(opts.tol)?;
    check_discount(discount)?;
    if discount.len() < 2 {
        return Err(IndexError::HorizonTooShort);
    }
    if !discount.all_positive() {
        return Err(IndexError::NonPositiveDiscount);
    }
    let inner_tol = opts.tol.min(DEFAULT_TOL) / 16.0;
    let solver = &opts.solver;
    let root = bisect_lambda(arm, discount, inner_tol, solver)?.value;
    let rest = discount.drop_first();

    let mut probes: Vec<(f64, f64)> = Vec::new();
    let mut gap = |x: f64| -> Result<f64, IndexError> {
        let updated = arm.posterior_update(x);
        let h = bisect_lambda(&updated, &rest, inner_tol, solver)?.value - root;
        probes.push((x, h));
        Ok(h)
    };

    let span = (arm.max_location() - arm.min_location()).max(1.0);
    let mut low = root;
    let mut high;
    let mut iterations = 0;
    if gap(low)? >= 0.0 {
        high = low;
        let mut step = span;
        let mut found = false;
        for _ in 0..MAX_EXPANSIONS {
            low = high - step;
            iterations += 1;
            if gap(low)? < 0.0 {
                found = true;
                break;
            }
            high = low;
            step *= 2.0;
        }
        if !found {
            return Err(IndexError::BracketNotFound);
        }
    } else {
        high = arm.max_location().max(root);
        let mut step = span;
        let mut found = gap(high)? >= 0.0;
        for _ in 0..MAX_EXPANSIONS {
            if found {
                break;
            }
            low = high;
            high += step;
            iterations += 1;
            found = gap(high)? >= 0.0;
            step *= 2.0;
        }
        if !found {
            return Err(IndexError::BracketNotFound);
        }
    }
    let mut high_gap = f64::NAN;
    while high - low > opts.tol {
        let mid = 0.5 * (low + high);
        if mid <= low || mid >= high {
            break;
        }
        iterations += 1;
        let h = gap(mid)?;
        if h >= 0.0 {
            high = mid;
            high_gap = h;
        } else {
            low = mid;
        }
    }
    if high_gap.is_nan() {
        high_gap = gap(high)?;
    }
    probes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let noise = 4.0 * inner_tol;
    let nonmonotone = probes.windows(2).any(|w| w[1].1 < w[0].1 - noise);
    Ok(IndexResult {
        value: high,
        bracket: (low, high),
        iterations,
        residual: high_gap.abs(),
        nonmonotone,
    })
}

/// Expected direction of `Λ` along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
}

/// One-parameter families of arms used by sweeps.
#[derive(Debug, Clone, PartialEq)]
pub enum ArmFamily {
    /// Fixed prior mean distribution, prior weight `M = param`.
    Mass(DiscreteMeasure),
    /// Every atom `x` (weight `w`) becomes `x ± param` with `w/2` each.
    Spread(DiscreteMeasure),
    /// Every atom moved by `param`.
    Shift(DiscreteMeasure),
}

impl ArmFamily {
    pub fn member(&self, param: f64) -> Result<DiscreteMeasure, MeasureError> {
        if !param.is_finite() {
            return Err(MeasureError::InvalidParameter(
                "sweep parameter must be finite",
            ));
        }
        match self {
            ArmFamily::Mass(base) => base.with_total_mass(param),
            ArmFamily::Spread(base) => {
                if param < 0.0 {
                    return Err(MeasureError::InvalidParameter("spread must be nonnegative"));
                }
                if param == 0.0 {
                    return Ok(base.clone());
                }
                DiscreteMeasure::new(
                    base.pairs()
                        .flat_map(|(x, w)| [(x - param, 0.5 * w), (x + param, 0.5 * w)])
                        .collect::<Vec<_>>(),
                )
            }
            ArmFamily::Shift(base) => Ok(base.shifted(param)),
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            ArmFamily::Mass(_) => Direction::Nonincreasing,
            ArmFamily::Spread(_) | ArmFamily::Shift(_) => Direction::Nondecreasing,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub direction: Direction,
    /// Row indices `k` where rows `k` and `k + 1` break the expected order.
    pub flags: Vec<usize>,
}

pub const SWEEP_CSV_HEADER: &str = "param,lambda,residual,iterations";

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_sig(r.param, 10),
                format_sig(r.lambda, 10),
                format_sig(r.residual, 10),
                r.iterations
            );
        }
        out
    }
}

/// `Λ` along a family; rows evaluate independently (in parallel when the
/// solver options allow it).
pub fn index_sweep(
    family: &ArmFamily,
    discount: &DiscountSeq,
    grid: &[f64],
    opts: &IndexOptions,
) -> Result<SweepTable, IndexError> {
    let rows: Vec<Result<SweepRow, IndexError>> =
        par::map_slice(grid, opts.solver.parallel, |&param| {
            let arm = family.member(param)?;
            // Rows already run concurrently; keep each solve sequential.
            let inner = IndexOptions {
                solver: SolverOptions {
                    parallel: false,
                    ..opts.solver.clone()
                },
                ..opts.clone()
            };
            let r = break_even_value(&arm, discount, &inner)?;
            Ok(SweepRow {
                param,
                lambda: r.value,
                residual: r.residual,
                iterations: r.iterations,
            })
        });
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    let direction = family.direction();
    let flags = rows
        .windows(2)
        .enumerate()
        .filter(|(_, w)| {
            let dp = w[1].param - w[0].param;
            let dl = w[1].lambda - w[0].lambda;
            let signed = match direction {
                Direction::Nondecreasing => dl * dp.signum(),
                Direction::Nonincreasing => -dl * dp.signum(),
            };
            signed < -SWEEP_FLAG_TOL
        })
        .map(|(k, _)| k)
        .collect();
    Ok(SweepTable {
        rows,
        direction,
        flags,
    })
}
