//! Scalar abstraction shared by every algebraic routine in the crate.
//!
//! The closure formulas are polynomials with rational coefficients, so the
//! only requirements are ring operations and a way to embed exact rational
//! constants. Floating point, exact rationals, forward-mode duals and
//! Laurent polynomials in `c` all satisfy this.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact rational number used by the rational backend and the c-series engine.
pub type Rational = BigRational;

/// Commutative ring element with exact rational constants.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    /// Embed an exact rational constant.
    fn from_rational(q: &Rational) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&ratio(num, den))
    }

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn scale(self, num: i64, den: i64) -> Self {
        self * Self::from_ratio(num, den)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc *= self.clone();
        }
        acc
    }
}

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

impl Scalar for f64 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn from_rational(q: &Rational) -> Self {
        q.to_f32().unwrap_or(f32::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }
}

impl Scalar for Rational {
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

/// Exact rational from a finite `f64` (binary expansion, no rounding).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// Parse `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Canonical `"p/q"` text (integers print without a denominator).
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Absolute value as `f64`, for reporting and tolerance scaling.
pub fn magnitude<T: ToPrimitive>(x: &T) -> f64 {
    x.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_constants_are_exact() {
        let x = Rational::from_ratio(16, 5) - Rational::from_ratio(6, 5);
        assert_eq!(x, ratio(2, 1));
        assert_eq!(f64::from_ratio(1, 4), 0.25);
    }

    #[test]
    fn parse_and_format() {
        let q = parse_rational(" -37/375 ").unwrap();
        assert_eq!(format_rational(&q), "-37/375");
        assert_eq!(format_rational(&parse_rational("12/4").unwrap()), "3");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn powi_matches_repeated_product() {
        let q = ratio(-2, 3);
        assert_eq!(q.powi(3), ratio(-8, 27));
        assert_eq!(q.powi(0), Rational::one());
    }
}
