//! Finite discrete measures and the Dirichlet-process update rules.
//!
//! A Dirichlet-process prior `DP(α)` is carried entirely by its base
//! measure `α = M·F`. Observing `x` turns it into `DP(α + δ_x)`, and the next
//! observation is distributed as `α / M`.

use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("measure has no positive weight")]
    EmptyMeasure,
    #[error("negative weight at pair {index}")]
    NegativeWeight { index: usize },
    #[error("non-finite value at pair {index}")]
    NonFinite { index: usize },
    #[error("measure is not normalized (total mass {total})")]
    NotNormalized { total: f64 },
    #[error("atom index {index} out of range for {len} atoms")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom<S> {
    pub location: S,
    pub weight: S,
}

/// A finite nonnull measure with strictly increasing atom locations and
/// strictly positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<S = f64> {
    atoms: Vec<Atom<S>>,
    total_mass: S,
}

/// Tolerance on `|M - 1|` for routines that require a probability measure.
pub const NORMALIZATION_TOL: f64 = 1e-9;

impl<S: Scalar> DiscreteMeasure<S> {
    /// Builds a measure from `(location, weight)` pairs. Zero weights are
    /// dropped and coincident locations merged.
    pub fn new<I>(pairs: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (S, S)>,
    {
        let zero = S::zero();
        let mut kept = Vec::new();
        for (index, (location, weight)) in pairs.into_iter().enumerate() {
            if !S::EXACT && !(location.to_f64().is_finite() && weight.to_f64().is_finite()) {
                return Err(MeasureError::NonFinite { index });
            }
            if weight < zero {
                return Err(MeasureError::NegativeWeight { index });
            }
            if weight > zero {
                kept.push(Atom { location, weight });
            }
        }
        if kept.is_empty() {
            return Err(MeasureError::EmptyMeasure);
        }
        kept.sort_by(|a, b| {
            a.location
                .partial_cmp(&b.location)
                .expect("finite locations are totally ordered")
        });
        let mut atoms: Vec<Atom<S>> = Vec::with_capacity(kept.len());
        for atom in kept {
            match atoms.last_mut() {
                Some(last) if last.location.same_location(&atom.location) => {
                    last.weight = last.weight.clone() + atom.weight;
                }
                _ => atoms.push(atom),
            }
        }
        let total_mass = S::sum(atoms.iter().map(|a| a.weight.clone()));
        Ok(Self { atoms, total_mass })
    }

    /// `weight · δ_location`.
    pub fn point_mass(location: S, weight: S) -> Result<Self, MeasureError> {
        Self::new([(location, weight)])
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Always false; present for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> &S {
        &self.total_mass
    }

    pub fn locations(&self) -> impl Iterator<Item = &S> {
        self.atoms.iter().map(|a| &a.location)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (S, S)> + '_ {
        self.atoms
            .iter()
            .map(|a| (a.location.clone(), a.weight.clone()))
    }

    pub fn min_location(&self) -> &S {
        &self.atoms[0].location
    }

    pub fn max_location(&self) -> &S {
        &self.atoms[self.atoms.len() - 1].location
    }

    /// Single support point.
    pub fn is_degenerate(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn is_normalized(&self) -> bool {
        self.total_mass.within(&S::one(), NORMALIZATION_TOL)
    }

    pub(crate) fn require_normalized(&self) -> Result<(), MeasureError> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(MeasureError::NotNormalized {
                total: self.total_mass.to_f64(),
            })
        }
    }

    /// First moment of the normalized measure.
    pub fn mean(&self) -> S {
        S::sum(
            self.atoms
                .iter()
                .map(|a| a.weight.clone() * a.location.clone()),
        ) / self.total_mass.clone()
    }

    /// `self + weight · δ_x`.
    pub fn add_point(&self, x: S, weight: S) -> Result<Self, MeasureError> {
        Self::new(self.pairs().chain(std::iter::once((x, weight))))
    }

    /// Dirichlet posterior base measure after observing `x`: `α + δ_x`.
    pub fn posterior_update(&self, x: S) -> Self {
        self.add_point(x, S::one())
            .expect("adding a unit atom to a valid measure stays valid")
    }

    /// Sum of two measures.
    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.pairs().chain(other.pairs())).expect("sum of valid measures is valid")
    }

    /// Predictive distribution `α / M`.
    pub fn predictive(&self) -> Self {
        let total = self.total_mass.clone();
        let atoms: Vec<Atom<S>> = self
            .atoms
            .iter()
            .map(|a| Atom {
                location: a.location.clone(),
                weight: a.weight.clone() / total.clone(),
            })
            .collect();
        let total_mass = S::sum(atoms.iter().map(|a| a.weight.clone()));
        Self { atoms, total_mass }
    }

    /// Multiplies every weight by `c > 0`.
    pub fn scaled(&self, c: S) -> Result<Self, MeasureError> {
        if c <= S::zero() {
            return Err(MeasureError::InvalidParameter(
                "scale factor must be positive",
            ));
        }
        Self::new(self.pairs().map(|(x, w)| (x, w * c.clone())))
    }

    /// Same prior mean distribution with prior weight `mass`.
    pub fn with_total_mass(&self, mass: S) -> Result<Self, MeasureError> {
        if mass <= S::zero() {
            return Err(MeasureError::InvalidParameter(
                "total mass must be positive",
            ));
        }
        let factor = mass / self.total_mass.clone();
        self.scaled(factor)
    }

    /// Moves every atom by `t`.
    pub fn shifted(&self, t: S) -> Self {
        Self::new(self.pairs().map(|(x, w)| (x + t.clone(), w))).expect("shift keeps weights")
    }

    /// Multiplies every location by `c > 0`.
    pub fn scaled_locations(&self, c: S) -> Result<Self, MeasureError> {
        if c <= S::zero() {
            return Err(MeasureError::InvalidParameter(
                "location scale must be positive",
            ));
        }
        Self::new(self.pairs().map(|(x, w)| (x * c.clone(), w)))
    }

    /// Moves atom `index` to `location` (merging if it lands on another atom).
    pub fn relocate_atom(&self, index: usize, location: S) -> Result<Self, MeasureError> {
        if index >= self.atoms.len() {
            return Err(MeasureError::IndexOutOfRange {
                index,
                len: self.atoms.len(),
            });
        }
        Self::new(self.pairs().enumerate().map(|(i, (x, w))| {
            if i == index {
                (location.clone(), w)
            } else {
                (x, w)
            }
        }))
    }

    /// The mixture `rho·f + (1 - rho)·g` for `rho ∈ [0, 1]`.
    pub fn mix(rho: S, f: &Self, g: &Self) -> Result<Self, MeasureError> {
        let zero = S::zero();
        let one = S::one();
        if rho < zero || rho > one {
            return Err(MeasureError::InvalidParameter(
                "mixture weight outside [0, 1]",
            ));
        }
        if rho.is_zero() {
            return Ok(g.clone());
        }
        if rho == one {
            return Ok(f.clone());
        }
        let rest = one - rho.clone();
        Self::new(
            f.pairs()
                .map(|(x, w)| (x, w * rho.clone()))
                .chain(g.pairs().map(|(x, w)| (x, w * rest.clone()))),
        )
    }

    /// Converts to float arithmetic.
    pub fn to_f64(&self) -> DiscreteMeasure<f64> {
        DiscreteMeasure::new(self.pairs().map(|(x, w)| (x.to_f64(), w.to_f64())))
            .expect("converted weights stay positive")
    }
}

impl DiscreteMeasure<f64> {
    /// Image of a float measure in another backend. Every finite float is a
    /// dyadic rational, so the exact image is lossless.
    pub fn cast<S: Scalar>(&self) -> DiscreteMeasure<S> {
        DiscreteMeasure::new(self.pairs().map(|(x, w)| {
            (
                S::from_f64(x).expect("finite"),
                S::from_f64(w).expect("finite"),
            )
        }))
        .expect("image of a valid measure is valid")
    }

    pub fn to_exact(&self) -> DiscreteMeasure<crate::scalar::Exact> {
        self.cast()
    }
}

impl<S: Scalar> fmt::Display for DiscreteMeasure<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", atom.location, atom.weight)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn m(pairs: &[(f64, f64)]) -> DiscreteMeasure {
        DiscreteMeasure::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn construction_merges_and_drops() {
        let a = m(&[(0.0, 0.5), (1.0, 0.5)]);
        assert_eq!(a.len(), 2);
        assert_eq!(*a.total_mass(), 1.0);

        let b = m(&[(1.0, 1.0), (1.0, 1.0)]);
        assert_eq!(b.len(), 1);
        assert_eq!(b.atoms()[0].weight, 2.0);
        assert_eq!(*b.total_mass(), 2.0);

        let c = m(&[(1.0, 1.0), (0.0, 0.0), (-2.0, 3.0)]);
        assert_eq!(c.len(), 2);
        assert_eq!(*c.min_location(), -2.0);

        let drift = m(&[(0.3, 1.0), (0.1 + 0.2, 1.0)]);
        assert_eq!(drift.len(), 1);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            DiscreteMeasure::new([(3.0, 0.0)]),
            Err(MeasureError::EmptyMeasure)
        );
        assert_eq!(
            DiscreteMeasure::<f64>::new(std::iter::empty()),
            Err(MeasureError::EmptyMeasure)
        );
        assert_eq!(
            DiscreteMeasure::new([(0.0, 1.0), (1.0, -0.5)]),
            Err(MeasureError::NegativeWeight { index: 1 })
        );
        assert!(matches!(
            DiscreteMeasure::new([(f64::NAN, 1.0)]),
            Err(MeasureError::NonFinite { .. })
        ));
    }

    #[test]
    fn means() {
        assert_eq!(m(&[(0.7, 1.0)]).mean(), 0.7);
        assert_eq!(m(&[(0.0, 1.0), (1.0, 1.0)]).mean(), 0.5);
        assert!((m(&[(0.0, 1.0), (1.0, 2.0)]).mean() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn posterior_updates() {
        let a = m(&[(0.0, 1.0), (1.0, 1.0)]);
        let up = a.posterior_update(1.0);
        assert_eq!(up, m(&[(0.0, 1.0), (1.0, 2.0)]));
        assert_eq!(*up.total_mass(), 3.0);

        assert_eq!(m(&[(0.5, 1.0)]).posterior_update(0.5), m(&[(0.5, 2.0)]));

        let inserted = a.posterior_update(0.25);
        assert_eq!(inserted, m(&[(0.0, 1.0), (0.25, 1.0), (1.0, 1.0)]));
    }

    #[test]
    fn predictive_normalizes() {
        assert_eq!(
            m(&[(0.0, 1.0), (1.0, 3.0)]).predictive(),
            m(&[(0.0, 0.25), (1.0, 0.75)])
        );
        assert_eq!(m(&[(2.0, 5.0)]).predictive(), m(&[(2.0, 1.0)]));
        assert_eq!(
            m(&[(0.0, 2.0), (1.0, 2.0)]).predictive(),
            m(&[(0.0, 0.5), (1.0, 0.5)])
        );
    }

    #[test]
    fn transforms() {
        let a = m(&[(0.0, 1.0), (1.0, 3.0)]);
        assert_eq!(
            a.with_total_mass(8.0).unwrap(),
            m(&[(0.0, 2.0), (1.0, 6.0)])
        );
        assert_eq!(a.shifted(1.0), m(&[(1.0, 1.0), (2.0, 3.0)]));
        assert_eq!(
            a.scaled_locations(2.0).unwrap(),
            m(&[(0.0, 1.0), (2.0, 3.0)])
        );
        assert!(a.scaled(0.0).is_err());
        assert_eq!(a.relocate_atom(0, 1.0).unwrap(), m(&[(1.0, 4.0)]));
        assert!(matches!(
            a.relocate_atom(2, 0.0),
            Err(MeasureError::IndexOutOfRange { index: 2, len: 2 })
        ));
        let f = m(&[(0.0, 1.0)]);
        let g = m(&[(1.0, 1.0)]);
        assert_eq!(
            DiscreteMeasure::mix(0.25, &f, &g).unwrap(),
            m(&[(0.0, 0.25), (1.0, 0.75)])
        );
        assert_eq!(DiscreteMeasure::mix(0.0, &f, &g).unwrap(), g);
    }

    #[test]
    fn exact_merges_only_on_equality() {
        let third = Exact::parse_number("1/3").unwrap();
        let almost = Exact::parse_number("0.333333333333333").unwrap();
        let one = Exact::one();
        let a =
            DiscreteMeasure::new([(third.clone(), one.clone()), (almost, one.clone())]).unwrap();
        assert_eq!(a.len(), 2);
        let b = DiscreteMeasure::new([(third.clone(), one.clone()), (third, one)]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(*b.total_mass(), Exact::from_i64(2));
    }
}
