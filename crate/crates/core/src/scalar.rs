//! Arithmetic backends.
//!
//! Every numeric routine in the crate is generic over [`Scalar`]. Two
//! backends are provided: `f64` (the default, with tolerant comparisons and
//! compensated summation) and [`Exact`], an arbitrary-precision rational in
//! which every comparison is exact.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational backend.
pub type Exact = BigRational;

/// Absolute distance under which two float locations are the same atom.
pub const FLOAT_MERGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{input}`: {reason}")]
pub struct ParseNumberError {
    pub input: String,
    pub reason: &'static str,
}

impl ParseNumberError {
    fn new(input: &str, reason: &'static str) -> Self {
        Self {
            input: input.to_string(),
            reason,
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends where comparisons carry no tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact conversion of a finite float; `None` for NaN or infinities.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    /// Parses decimal (`-1.25`, `3e-2`) or fraction (`2/3`) syntax.
    fn parse_number(s: &str) -> Result<Self, ParseNumberError>;

    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;

    /// Sum of a sequence. The float backend uses Neumaier compensation.
    fn sum<I: IntoIterator<Item = Self>>(iter: I) -> Self;

    /// Whether two atom locations should be merged.
    fn same_location(&self, other: &Self) -> bool;

    /// `|self - other| <= tol`, with `tol` applied in the backend's arithmetic.
    fn within(&self, other: &Self, tol: f64) -> bool;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    /// Default tolerance for inequality checks in this backend.
    fn default_slack() -> f64 {
        if Self::EXACT {
            0.0
        } else {
            1e-9
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn parse_number(s: &str) -> Result<Self, ParseNumberError> {
        let t = s.trim();
        let value = match t.split_once('/') {
            Some((num, den)) => {
                let num = parse_decimal_f64(num.trim(), s)?;
                let den = parse_decimal_f64(den.trim(), s)?;
                if den == 0.0 {
                    return Err(ParseNumberError::new(s, "zero denominator"));
                }
                num / den
            }
            None => parse_decimal_f64(t, s)?,
        };
        if !value.is_finite() {
            return Err(ParseNumberError::new(s, "not finite"));
        }
        Ok(value)
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn sum<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        let mut sum = 0.0_f64;
        let mut comp = 0.0_f64;
        for x in iter {
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    fn same_location(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_MERGE_TOL
    }

    fn within(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

fn parse_decimal_f64(t: &str, original: &str) -> Result<f64, ParseNumberError> {
    // Reject the spellings std accepts but a config should not ("inf", "nan").
    if t.is_empty() || !t.bytes().any(|b| b.is_ascii_digit()) {
        return Err(ParseNumberError::new(original, "expected digits"));
    }
    t.parse::<f64>()
        .map_err(|_| ParseNumberError::new(original, "malformed decimal"))
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }

    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn parse_number(s: &str) -> Result<Self, ParseNumberError> {
        let t = s.trim();
        match t.split_once('/') {
            Some((num, den)) => {
                let num = parse_decimal_exact(num.trim(), s)?;
                let den = parse_decimal_exact(den.trim(), s)?;
                if Zero::is_zero(&den) {
                    return Err(ParseNumberError::new(s, "zero denominator"));
                }
                Ok(num / den)
            }
            None => parse_decimal_exact(t, s),
        }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn sum<I: IntoIterator<Item = Self>>(iter: I) -> Self {
        iter.into_iter()
            .fold(<Self as Scalar>::zero(), |acc, x| acc + x)
    }

    fn same_location(&self, other: &Self) -> bool {
        self == other
    }

    fn within(&self, other: &Self, tol: f64) -> bool {
        let diff = Signed::abs(&(self - other));
        match BigRational::from_float(tol) {
            Some(t) => diff <= t,
            None => false,
        }
    }
}

/// Exact decimal parse: optional sign, digits with an optional point,
/// optional exponent.
fn parse_decimal_exact(t: &str, original: &str) -> Result<Exact, ParseNumberError> {
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = t[pos + 1..]
                .parse()
                .map_err(|_| ParseNumberError::new(original, "malformed exponent"))?;
            (&t[..pos], exp)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(ParseNumberError::new(original, "expected digits"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(ParseNumberError::new(original, "malformed decimal"));
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer: BigInt = all_digits
        .parse()
        .map_err(|_| ParseNumberError::new(original, "malformed decimal"))?;
    let scale = exponent - frac_part.len() as i32;
    if scale.unsigned_abs() > 4096 {
        return Err(ParseNumberError::new(original, "exponent out of range"));
    }
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Formats `x` with `digits` significant digits, without trailing-zero
/// trimming so that columns stay diff-stable.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        let decimals = digits.saturating_sub(1);
        return format!("{:.decimals$}", 0.0);
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // Rounding can carry into a new leading digit (9.99.. -> 10.0..).
        let carried = s
            .trim_start_matches('-')
            .split('.')
            .next()
            .map_or(0, str::len);
        if exp >= 0 && carried as i32 > exp + 1 && decimals > 0 {
            let decimals = decimals - 1;
            return format!("{x:.decimals$}");
        }
        s
    } else {
        let prec = digits.saturating_sub(1);
        format!("{x:.prec$e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_and_decimal_exactly() {
        let two_thirds = Exact::parse_number("2/3").unwrap();
        assert_eq!(two_thirds, BigRational::new(2.into(), 3.into()));
        let tenth = Exact::parse_number("0.1").unwrap();
        assert_eq!(tenth, BigRational::new(1.into(), 10.into()));
        let neg = Exact::parse_number("-1.25e1").unwrap();
        assert_eq!(neg, Exact::from_i64(-25) / Exact::from_i64(2));
        assert_eq!(Exact::parse_number("3").unwrap(), Exact::from_i64(3));
    }

    #[test]
    fn float_parse_matches() {
        assert!((f64::parse_number("2/3").unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(f64::parse_number(" 0.25 ").unwrap(), 0.25);
        assert!(f64::parse_number("1/0").is_err());
        assert!(f64::parse_number("inf").is_err());
        assert!(f64::parse_number("").is_err());
        assert!(Exact::parse_number("1.2.3").is_err());
        assert!(Exact::parse_number("abc").is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(<f64 as Scalar>::sum(terms), 2.0);
    }

    #[test]
    fn within_respects_backend() {
        let a = 0.5_f64;
        assert!(a.within(&(0.5 + 1e-13), 1e-12));
        let x = Exact::parse_number("1/3").unwrap();
        let y = Exact::parse_number("1/3").unwrap();
        assert!(x.within(&y, 0.0));
        assert!(!x.within(&Exact::parse_number("0.3333").unwrap(), 0.0));
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(13.0 / 12.0, 10), "1.083333333");
        assert_eq!(format_sig(5.0 / 9.0, 10), "0.5555555556");
        assert_eq!(format_sig(0.0, 10), "0.000000000");
        assert_eq!(format_sig(2.0, 10), "2.000000000");
        assert_eq!(format_sig(9.9999999999, 10), "10.00000000");
        assert_eq!(format_sig(1.5e-7, 3), "1.50e-7");
    }
}
