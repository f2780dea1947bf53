//! Stochastic-order predicates between finite distributions.
//!
//! For finitely supported distributions the defining "for every test
//! function" conditions reduce to finitely many checks: the CDF is a step
//! function and the stop-loss transform `t ↦ E(X - t)_+` is piecewise linear,
//! both with breakpoints only at atom locations. Comparing them at the union
//! of the two supports (plus one point below it, which compares the means)
//! decides `≤st`, `≤icx` and, together with equal means, `≤cx`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::{DiscreteMeasure, MeasureError};
use crate::scalar::Scalar;

/// Float slack for order comparisons, scaled by the magnitude of the support.
pub const ORDER_TOL: f64 = 1e-12;
/// Mean-equality tolerance for the convex order.
pub const MEAN_EQ_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct OrderCheckResult<S = f64> {
    pub holds: bool,
    /// A point where the defining inequality fails, when it does.
    pub witness: Option<S>,
    /// Minimum slack over all checked points (negative on violation).
    pub margin: f64,
}

/// `E(X - t)_+` for a probability measure.
pub fn stop_loss<S: Scalar>(m: &DiscreteMeasure<S>, t: &S) -> Result<S, MeasureError> {
    m.require_normalized()?;
    Ok(stop_loss_unchecked(m, t))
}

fn stop_loss_unchecked<S: Scalar>(m: &DiscreteMeasure<S>, t: &S) -> S {
    S::sum(
        m.atoms()
            .iter()
            .filter(|a| a.location > *t)
            .map(|a| a.weight.clone() * (a.location.clone() - t.clone()) / m.total_mass().clone()),
    )
}

/// `P(X <= t)`; locations that merge with `t` count as equal.
pub fn cdf<S: Scalar>(m: &DiscreteMeasure<S>, t: &S) -> S {
    S::sum(
        m.atoms()
            .iter()
            .filter(|a| a.location <= *t || a.location.same_location(t))
            .map(|a| a.weight.clone() / m.total_mass().clone()),
    )
}

fn support_union<S: Scalar>(f: &DiscreteMeasure<S>, g: &DiscreteMeasure<S>) -> Vec<S> {
    let mut points: Vec<S> = f.locations().chain(g.locations()).cloned().collect();
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    points.dedup_by(|a, b| a.same_location(b));
    points
}

fn tolerance<S: Scalar>(points: &[S]) -> f64 {
    if S::EXACT {
        return 0.0;
    }
    let scale = points
        .iter()
        .map(|p| p.to_f64().abs())
        .fold(1.0_f64, f64::max);
    ORDER_TOL * scale
}

/// Scans `(t, slack)` pairs, slack = rhs - lhs of the defining inequality.
fn scan<S: Scalar>(items: impl Iterator<Item = (S, S)>, tol: f64) -> OrderCheckResult<S> {
    let mut margin = f64::INFINITY;
    let mut witness = None;
    for (t, slack) in items {
        let slack_f = slack.to_f64();
        let violated = if S::EXACT {
            slack < S::zero()
        } else {
            slack_f < -tol
        };
        if violated && witness.is_none() {
            witness = Some(t);
        }
        margin = margin.min(slack_f);
    }
    OrderCheckResult {
        holds: witness.is_none(),
        witness,
        margin: if margin.is_finite() { margin } else { 0.0 },
    }
}

/// Usual stochastic order `f ≤st g`: `F(t) ≥ G(t)` everywhere.
pub fn leq_st<S: Scalar>(
    f: &DiscreteMeasure<S>,
    g: &DiscreteMeasure<S>,
) -> Result<OrderCheckResult<S>, MeasureError> {
    f.require_normalized()?;
    g.require_normalized()?;
    let points = support_union(f, g);
    let tol = if S::EXACT { 0.0 } else { ORDER_TOL };
    Ok(scan(
        points.into_iter().map(|t| {
            let slack = cdf(f, &t) - cdf(g, &t);
            (t, slack)
        }),
        tol,
    ))
}

/// Increasing convex order `f ≤icx g`: stop-loss of `f` below that of `g`.
pub fn leq_icx<S: Scalar>(
    f: &DiscreteMeasure<S>,
    g: &DiscreteMeasure<S>,
) -> Result<OrderCheckResult<S>, MeasureError> {
    f.require_normalized()?;
    g.require_normalized()?;
    let mut points = support_union(f, g);
    let tol = tolerance(&points);
    // Below the joint support the transforms are `mean - t`.
    let below = points[0].clone() - S::one();
    points.insert(0, below);
    Ok(scan(
        points.into_iter().map(|t| {
            let slack = stop_loss_unchecked(g, &t) - stop_loss_unchecked(f, &t);
            (t, slack)
        }),
        tol,
    ))
}

/// Convex order `f ≤cx g`: equal means and `f ≤icx g`.
pub fn leq_cx<S: Scalar>(
    f: &DiscreteMeasure<S>,
    g: &DiscreteMeasure<S>,
) -> Result<OrderCheckResult<S>, MeasureError> {
    let icx = leq_icx(f, g)?;
    let mean_gap = f.mean() - g.mean();
    let means_equal = if S::EXACT {
        mean_gap.is_zero()
    } else {
        mean_gap.to_f64().abs() <= MEAN_EQ_TOL
    };
    if !icx.holds || means_equal {
        return Ok(icx);
    }
    // icx holds with mean(f) < mean(g); the lower transform E(t - X)_+
    // fails above the joint support.
    let top = S::max_of(f.max_location().clone(), g.max_location().clone()) + S::one();
    Ok(OrderCheckResult {
        holds: false,
        witness: Some(top),
        margin: icx.margin.min(-mean_gap.to_f64().abs()),
    })
}

/// Splits atom `atom_index` at `x` into `x ± delta`, half the weight each.
/// The result is larger in the convex order.
pub fn mean_preserving_spread<S: Scalar>(
    f: &DiscreteMeasure<S>,
    atom_index: usize,
    delta: S,
) -> Result<DiscreteMeasure<S>, MeasureError> {
    if atom_index >= f.len() {
        return Err(MeasureError::IndexOutOfRange {
            index: atom_index,
            len: f.len(),
        });
    }
    if delta <= S::zero() {
        return Err(MeasureError::InvalidParameter(
            "spread delta must be positive",
        ));
    }
    let two = S::from_i64(2);
    let pairs = f.pairs().enumerate().flat_map(|(i, (x, w))| {
        if i == atom_index {
            let half = w / two.clone();
            vec![
                (x.clone() - delta.clone(), half.clone()),
                (x + delta.clone(), half),
            ]
        } else {
            vec![(x, w)]
        }
    });
    DiscreteMeasure::new(pairs.collect::<Vec<_>>())
}

/// A seeded spread: uniformly chosen atom, `delta = k/8` with `k ∈ 1..=8`.
pub fn random_mean_preserving_spread<S: Scalar>(
    f: &DiscreteMeasure<S>,
    seed: u64,
) -> DiscreteMeasure<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let index = rng.random_range(0..f.len());
    let delta = S::from_i64(rng.random_range(1..=8)) / S::from_i64(8);
    mean_preserving_spread(f, index, delta).expect("index and delta are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn m(pairs: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(pairs.iter().copied()).unwrap()
    }

    fn coin() -> DiscreteMeasure {
        m(&[(0.0, 0.5), (1.0, 0.5)])
    }

    #[test]
    fn stop_loss_values() {
        assert_eq!(stop_loss(&coin(), &0.5).unwrap(), 0.25);
        assert_eq!(stop_loss(&m(&[(2.0, 1.0)]), &2.0).unwrap(), 0.0);
        assert_eq!(stop_loss(&m(&[(2.0, 1.0)]), &3.5).unwrap(), 0.0);
        assert_eq!(stop_loss(&coin(), &-1.0).unwrap(), 1.5);
        assert!(matches!(
            stop_loss(&m(&[(0.0, 2.0)]), &0.0),
            Err(MeasureError::NotNormalized { .. })
        ));
    }

    #[test]
    fn usual_order() {
        let r = leq_st(&m(&[(0.0, 1.0)]), &coin()).unwrap();
        assert!(r.holds);
        let same = leq_st(&coin(), &coin()).unwrap();
        assert!(same.holds);
        assert_eq!(same.margin, 0.0);
        let rev = leq_st(&coin(), &m(&[(0.0, 1.0)])).unwrap();
        assert!(!rev.holds);
        assert_eq!(rev.witness, Some(0.0));
        assert!(matches!(
            leq_st(&m(&[(0.0, 3.0)]), &coin()),
            Err(MeasureError::NotNormalized { .. })
        ));
    }

    #[test]
    fn increasing_convex_order() {
        assert!(leq_icx(&m(&[(0.5, 1.0)]), &coin()).unwrap().holds);
        let rev = leq_icx(&coin(), &m(&[(0.5, 1.0)])).unwrap();
        assert!(!rev.holds);
        let t = rev.witness.unwrap();
        assert!(stop_loss(&coin(), &t).unwrap() > stop_loss(&m(&[(0.5, 1.0)]), &t).unwrap());
        assert!(leq_icx(&m(&[(0.0, 1.0)]), &m(&[(1.0, 1.0)])).unwrap().holds);
    }

    #[test]
    fn convex_order() {
        assert!(leq_cx(&m(&[(0.5, 1.0)]), &coin()).unwrap().holds);
        let shifted = leq_cx(&m(&[(0.0, 1.0)]), &m(&[(1.0, 1.0)])).unwrap();
        assert!(!shifted.holds);
        assert!(shifted.witness.is_some());
        assert!(leq_cx(&coin(), &coin()).unwrap().holds);
    }

    #[test]
    fn spreads() {
        assert_eq!(
            mean_preserving_spread(&m(&[(0.5, 1.0)]), 0, 0.5).unwrap(),
            coin()
        );
        assert_eq!(
            mean_preserving_spread(&coin(), 1, 0.25).unwrap(),
            m(&[(0.0, 0.5), (0.75, 0.25), (1.25, 0.25)])
        );
        assert!(matches!(
            mean_preserving_spread(&coin(), 2, 0.25),
            Err(MeasureError::IndexOutOfRange { .. })
        ));
        assert!(mean_preserving_spread(&coin(), 0, 0.0).is_err());
    }

    #[test]
    fn random_spreads_are_convex_larger() {
        let base = m(&[(-0.5, 0.25), (0.25, 0.5), (1.0, 0.25)]);
        for seed in 0..100 {
            let g = random_mean_preserving_spread(&base, seed);
            let r = leq_cx(&base, &g).unwrap();
            assert!(r.holds, "seed {seed}: margin {}", r.margin);
        }
    }

    #[test]
    fn exact_backend_agrees() {
        let half = Exact::parse_number("1/2").unwrap();
        let one = Exact::one();
        let point = DiscreteMeasure::new([(half.clone(), one.clone())]).unwrap();
        let spread = mean_preserving_spread(&point, 0, half.clone()).unwrap();
        let r = leq_cx(&point, &spread).unwrap();
        assert!(r.holds);
        assert_eq!(r.margin, 0.0);
        assert!(!leq_icx(&spread, &point).unwrap().holds);
    }
}
