//! Scalar fields shared by the exact (rational) and numeric (float) code paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Q = BigRational;

/// Tolerance under which a float is treated as zero by [`Field::is_zero`].
pub const F64_ZERO_TOL: f64 = 1e-9;

/// Arithmetic needed by the generic linear algebra and cone routines.
///
/// `is_zero` is exact for rationals and tolerance based for floats.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// True when arithmetic is exact (no rounding, no tolerances).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Magnitude used for pivot selection.
    fn magnitude(&self) -> f64;
    fn to_f64(&self) -> f64;
    fn from_i64(v: i64) -> Self;
    /// Exact for rationals (binary expansion), identity for floats.
    fn from_f64_lossy(v: f64) -> Self;

    /// -1, 0 or 1, consistent with `is_zero`.
    fn sign(&self) -> i8;
}

impl Field for Q {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::MAX)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn from_f64_lossy(v: f64) -> Self {
        Q::from_float(v).unwrap_or_else(Zero::zero)
    }
    fn sign(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= F64_ZERO_TOL
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64_lossy(v: f64) -> Self {
        v
    }
    fn sign(&self) -> i8 {
        if self.abs() <= F64_ZERO_TOL {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        }
    }
}

/// Rational from an integer.
pub fn q(v: i64) -> Q {
    Q::from_i64(v)
}

/// Rational `n/d`; panics when `d == 0`.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact binary value of a finite float.
pub fn q_from_f64(v: f64) -> Result<Q> {
    Q::from_float(v).ok_or_else(|| Error::Parse(format!("non-finite value {v}")))
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-0.125"` exactly.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if s.contains(['e', 'E']) {
        let v: f64 = s.parse().map_err(|_| bad())?;
        return q_from_f64(v);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = num::pow(BigInt::from(10), frac_part.len());
    let v = Q::new(numer, denom);
    Ok(if neg { -v } else { v })
}

/// Renders a rational as `"p/q"` (or `"p"` for integers).
pub fn format_q(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn to_f64_vec<F: Field>(v: &[F]) -> Vec<f64> {
    v.iter().map(Field::to_f64).collect()
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn add_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn neg_vec<F: Field>(a: &[F]) -> Vec<F> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn is_zero_vec<F: Field>(a: &[F]) -> bool {
    a.iter().all(Field::is_zero)
}

/// Scales `v` so its first nonzero entry is 1. Zero vectors are returned unchanged.
pub fn projective_normalize<F: Field>(v: &[F]) -> Vec<F> {
    match v.iter().find(|c| !c.is_zero()) {
        Some(p) => {
            let p = p.clone();
            v.iter().map(|c| c.clone() / p.clone()).collect()
        }
        None => v.to_vec(),
    }
}

pub fn euclid_norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(parse_q("-3/7").unwrap(), qr(-3, 7));
        assert_eq!(parse_q("0.125").unwrap(), qr(1, 8));
        assert_eq!(parse_q("-.5").unwrap(), qr(-1, 2));
        assert_eq!(parse_q("12").unwrap(), q(12));
        assert_eq!(parse_q("1e-1").unwrap(), q_from_f64(0.1).unwrap());
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert!(parse_q("").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for s in ["-3/7", "5", "0", "22/3"] {
            assert_eq!(format_q(&parse_q(s).unwrap()), s);
        }
    }

    #[test]
    fn float_zero_is_tolerant() {
        assert!(Field::is_zero(&1e-12f64));
        assert!(!Field::is_zero(&1e-6f64));
        assert_eq!(Field::sign(&-1e-6f64), -1);
    }

    #[test]
    fn projective_normalization() {
        let v = projective_normalize(&[q(0), q(-2), q(4)]);
        assert_eq!(v, vec![q(0), q(1), q(-2)]);
    }
}
