//! Scalar backends: exact rationals and tolerance-based floats.
//!
//! Decisions and certificates run on [`Rat`] (arbitrary-precision
//! rationals), where every comparison is exact and the tolerance is zero.
//! Measured data runs on `f64` with a configurable tolerance
//! (default 1e-9). A computation never mixes the two backends.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Rat = BigRational;

/// Field scalar used throughout the geometry and decision layers.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
    + 'static
{
    /// True when comparisons are exact (tolerances default to zero).
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossless conversion from a float (floats are rationals).
    fn from_f64_lossless(x: f64) -> Option<Self>;

    fn to_f64(&self) -> f64;

    /// Tolerance used when an operation is not handed one explicitly.
    fn default_tol() -> Self;

    /// Parses `p/q`, integer, or decimal (with optional exponent) notation.
    fn parse_number(s: &str) -> Option<Self>;

    /// Render for serialization: `p/q` for rationals, shortest decimal for floats.
    fn repr(&self) -> String;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_f64_lossless(x: f64) -> Option<Self> {
        Rat::from_f64(x)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn default_tol() -> Self {
        Rat::zero()
    }

    fn parse_number(s: &str) -> Option<Self> {
        parse_rational(s)
    }

    fn repr(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64_lossless(x: f64) -> Option<Self> {
        Some(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn default_tol() -> Self {
        1e-9
    }

    fn parse_number(s: &str) -> Option<Self> {
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().ok()?;
            let d: f64 = d.trim().parse().ok()?;
            return Some(n / d);
        }
        s.trim().parse().ok()
    }

    fn repr(&self) -> String {
        format!("{self}")
    }
}

/// Parses `p/q`, plain integers, and decimal notation (`-0.25`, `2.5e-3`)
/// into an exact rational. Decimal digits are taken at face value.
fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return None;
    }
    let numer: BigInt = digits.parse().ok()?;
    let shift = frac_part.len() as i32 - exp;
    let base = BigInt::from(10);
    let value = if shift >= 0 {
        Rat::new(numer, base.pow(shift as u32))
    } else {
        Rat::from_integer(numer * base.pow((-shift) as u32))
    };
    Some(value)
}

/// `|a - b| <= tol`.
pub fn approx_eq<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    (a.clone() - b.clone()).abs() <= *tol
}

/// `a <= b + tol`.
pub fn le_tol<T: Scalar>(a: &T, b: &T, tol: &T) -> bool {
    a.clone() - b.clone() <= *tol
}

/// `|x| <= tol`.
pub fn is_zero_tol<T: Scalar>(x: &T, tol: &T) -> bool {
    x.abs() <= *tol
}

/// `x` within `[lo, hi]` up to `tol` on both ends.
pub fn in_interval<T: Scalar>(x: &T, lo: &T, hi: &T, tol: &T) -> bool {
    le_tol(lo, x, tol) && le_tol(x, hi, tol)
}

/// `x` within `[0, 1]` up to `tol`.
pub fn in_unit_interval<T: Scalar>(x: &T, tol: &T) -> bool {
    in_interval(x, &T::zero(), &T::one(), tol)
}
