//! Discount sequences `A_n = (a_1, …, a_n)` with cached tail sums.

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscountError {
    #[error("discount sequence is empty")]
    Empty,
    #[error("negative discount at position {index}")]
    NegativeValue { index: usize },
    #[error("non-finite discount at position {index}")]
    NonFinite { index: usize },
    #[error("discount sequence sums to zero")]
    ZeroTotal,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Absolute slack in the regularity check (scaled by `T_1²` if larger).
pub const REGULARITY_SLACK: f64 = 1e-12;

/// Nonnegative weights with positive total. The empty sequence exists only
/// as the terminal value of [`DiscountSeq::drop_first`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountSeq<S = f64> {
    values: Vec<S>,
    /// `tails[j] = a_{j+1} + … + a_n` (0-based), `tails[n] = 0`.
    tails: Vec<S>,
}

impl<S: Scalar> DiscountSeq<S> {
    pub fn new(values: Vec<S>) -> Result<Self, DiscountError> {
        if values.is_empty() {
            return Err(DiscountError::Empty);
        }
        for (index, v) in values.iter().enumerate() {
            if !S::EXACT && !v.to_f64().is_finite() {
                return Err(DiscountError::NonFinite { index });
            }
            if *v < S::zero() {
                return Err(DiscountError::NegativeValue { index });
            }
        }
        let seq = Self::from_values_unchecked(values);
        if seq.total() <= S::zero() {
            return Err(DiscountError::ZeroTotal);
        }
        Ok(seq)
    }

    fn from_values_unchecked(values: Vec<S>) -> Self {
        let n = values.len();
        let mut tails = Vec::with_capacity(n + 1);
        for j in 0..=n {
            tails.push(S::sum(values[j..].iter().cloned()));
        }
        Self { values, tails }
    }

    /// The empty terminal sequence.
    pub fn terminal() -> Self {
        Self {
            values: Vec::new(),
            tails: vec![S::zero()],
        }
    }

    /// `(1, …, 1)` of length `n`.
    pub fn uniform(n: usize) -> Result<Self, DiscountError> {
        if n == 0 {
            return Err(DiscountError::InvalidParameter(
                "horizon must be at least 1",
            ));
        }
        Self::new(vec![S::one(); n])
    }

    /// `(1, β, …, β^{n-1})`.
    pub fn truncated_geometric(beta: S, n: usize) -> Result<Self, DiscountError> {
        if n == 0 {
            return Err(DiscountError::InvalidParameter(
                "horizon must be at least 1",
            ));
        }
        if beta <= S::zero() || beta >= S::one() {
            return Err(DiscountError::InvalidParameter("beta must lie in (0, 1)"));
        }
        let mut values = Vec::with_capacity(n);
        let mut current = S::one();
        for _ in 0..n {
            values.push(current.clone());
            current = current * beta.clone();
        }
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Weight of the 0-based `stage`.
    pub fn at(&self, stage: usize) -> &S {
        &self.values[stage]
    }

    /// `T_1 = a_1 + … + a_n`.
    pub fn total(&self) -> S {
        self.tails[0].clone()
    }

    /// Sum of the weights from 0-based `stage` on; `tail(len) = 0`.
    pub fn tail(&self, stage: usize) -> &S {
        &self.tails[stage]
    }

    pub fn tails(&self) -> &[S] {
        &self.tails
    }

    /// `A¹ = (a_2, …, a_n)`; the empty sequence when `n = 1`.
    pub fn drop_first(&self) -> Self {
        if self.values.len() <= 1 {
            return Self::terminal();
        }
        Self::from_values_unchecked(self.values[1..].to_vec())
    }

    pub fn all_positive(&self) -> bool {
        !self.values.is_empty() && self.values.iter().all(|v| *v > S::zero())
    }

    /// `T_{j+1}² ≥ T_j · T_{j+2}` for every `j`.
    pub fn is_regular(&self) -> bool {
        let n = self.values.len();
        if n < 2 {
            return true;
        }
        let slack = if S::EXACT {
            S::zero()
        } else {
            let t1 = self.total().to_f64();
            S::from_f64(REGULARITY_SLACK * (t1 * t1).max(1.0)).expect("finite")
        };
        (0..n - 1).all(|j| {
            let mid = self.tails[j + 1].clone();
            mid.clone() * mid >= self.tails[j].clone() * self.tails[j + 2].clone() - slack.clone()
        })
    }

    /// Multiplies every weight by `c > 0`.
    pub fn scaled(&self, c: S) -> Result<Self, DiscountError> {
        if c <= S::zero() {
            return Err(DiscountError::InvalidParameter("scale must be positive"));
        }
        Self::new(self.values.iter().map(|v| v.clone() * c.clone()).collect())
    }

    pub fn to_f64(&self) -> DiscountSeq<f64> {
        if self.is_empty() {
            return DiscountSeq::terminal();
        }
        DiscountSeq::from_values_unchecked(self.values.iter().map(Scalar::to_f64).collect())
    }
}

impl DiscountSeq<f64> {
    pub fn cast<S: Scalar>(&self) -> DiscountSeq<S> {
        if self.is_empty() {
            return DiscountSeq::terminal();
        }
        DiscountSeq::from_values_unchecked(
            self.values
                .iter()
                .map(|v| S::from_f64(*v).expect("finite"))
                .collect(),
        )
    }

    pub fn to_exact(&self) -> DiscountSeq<crate::scalar::Exact> {
        self.cast()
    }
}
