//! Coefficient types for cyclotomic elements.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::Neg;

/// Field of rational-like coefficients underlying [`crate::cyclo::Cyclo`].
pub trait Coefficient:
    Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Exact ratio `p / q`; `q` must be nonzero.
    fn from_ratio(p: i64, q: i64) -> Self;
    /// Canonical `"p/q"` rendering.
    fn to_exact_string(&self) -> String;
    /// Inverse of [`Coefficient::to_exact_string`]; also accepts plain integers and decimals.
    fn parse_exact(s: &str) -> Option<Self>;
    /// Whether equality on this type is exact (false for floats).
    fn is_exact() -> bool {
        true
    }
}

impl Coefficient for BigRational {
    fn from_ratio(p: i64, q: i64) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(BigRational::new(p.trim().parse().ok()?, q))
            }
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        }
    }
}

impl Coefficient for Rational64 {
    fn from_ratio(p: i64, q: i64) -> Self {
        Rational64::new(p, q)
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let q: i64 = q.trim().parse().ok()?;
                if q == 0 {
                    return None;
                }
                Some(Rational64::new(p.trim().parse().ok()?, q))
            }
            None => s.parse::<i64>().ok().map(Rational64::from_integer),
        }
    }
}

impl Coefficient for f64 {
    fn from_ratio(p: i64, q: i64) -> Self {
        p as f64 / q as f64
    }

    fn to_exact_string(&self) -> String {
        format!("{self:e}")
    }

    fn parse_exact(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
            None => s.parse().ok(),
        }
    }

    fn is_exact() -> bool {
        false
    }
}

/// Best rational approximation of `x` with denominator at most `max_den`, by continued fractions.
pub fn rational_approx(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some((i64::try_from(h1).ok()?, i64::try_from(k1).ok()?))
}

pub(crate) fn is_negligible<T: Coefficient>(x: &T) -> bool {
    if T::is_exact() {
        x.is_zero()
    } else {
        x.to_f64().is_some_and(|v| v.abs() < 1e-12)
    }
}
