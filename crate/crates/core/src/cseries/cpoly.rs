use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalar::{format_rational, parse_rational, Rational, Scalar};

/// Laurent polynomial in the light speed `c` with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CPoly {
    terms: BTreeMap<i32, Rational>,
}

impl CPoly {
    pub fn constant(q: Rational) -> Self {
        Self::monomial(q, 0)
    }

    /// `q · cⁿ`.
    pub fn monomial(q: Rational, n: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(n, q);
        }
        Self { terms }
    }

    /// `cⁿ`.
    pub fn c_pow(n: i32) -> Self {
        Self::monomial(Rational::one(), n)
    }

    pub fn coeff(&self, n: i32) -> Rational {
        self.terms.get(&n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(&n, q)| (n, q))
    }

    pub fn max_power(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_power(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Powers strictly above `n` that carry a nonzero coefficient.
    pub fn powers_above(&self, n: i32) -> Vec<i32> {
        self.terms.range(n + 1..).map(|(&p, _)| p).collect()
    }

    /// Multiply by `cⁿ`.
    pub fn shift(&self, n: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&p, q)| (p + n, q.clone())).collect(),
        }
    }

    fn add_term(&mut self, n: i32, q: Rational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(n).or_insert_with(Rational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&n);
        }
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(n, q)| match n {
                0 => format_rational(q),
                1 => format!("({}) c", format_rational(q)),
                _ => format!("({}) c^{}", format_rational(q), n),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Zero for CPoly {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for CPoly {
    fn one() -> Self {
        Self::c_pow(0)
    }
}

impl Neg for CPoly {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(n, q)| (n, -q)).collect(),
        }
    }
}

impl AddAssign for CPoly {
    fn add_assign(&mut self, rhs: Self) {
        for (n, q) in rhs.terms {
            self.add_term(n, q);
        }
    }
}

impl SubAssign for CPoly {
    fn sub_assign(&mut self, rhs: Self) {
        for (n, q) in rhs.terms {
            self.add_term(n, -q);
        }
    }
}

impl Add for CPoly {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl Sub for CPoly {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl Mul for CPoly {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zero();
        for (a, p) in &self.terms {
            for (b, q) in &rhs.terms {
                out.add_term(a + b, p * q);
            }
        }
        out
    }
}

impl MulAssign for CPoly {
    fn mul_assign(&mut self, rhs: Self) {
        *self = std::mem::take(self) * rhs;
    }
}

impl Scalar for CPoly {
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }

    fn scale(self, num: i64, den: i64) -> Self {
        let k = crate::scalar::ratio(num, den);
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.into_iter().map(|(n, q)| (n, q * k.clone())).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CPolyJson {
    c_powers: BTreeMap<String, String>,
}

impl Serialize for CPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CPolyJson {
            c_powers: self
                .terms
                .iter()
                .map(|(n, q)| (n.to_string(), format_rational(q)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = CPolyJson::deserialize(deserializer)?;
        let mut out = CPoly::zero();
        for (n, q) in raw.c_powers {
            let n: i32 = n
                .parse()
                .map_err(|_| D::Error::custom(format!("c_powers: `{n}` is not an integer power")))?;
            let q = parse_rational(&q)
                .ok_or_else(|| D::Error::custom(format!("c_powers.{n}: `{q}` is not a rational")))?;
            out.add_term(n, q);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = CPoly::monomial(ratio(3, 2), 2) + CPoly::monomial(ratio(-1, 4), -2);
        let d = p.clone() - p;
        assert!(d.is_zero());
        assert_eq!(d.max_power(), None);
    }

    #[test]
    fn laurent_product() {
        let c = CPoly::c_pow(1);
        let inv = CPoly::c_pow(-1);
        assert_eq!(c.clone() * inv, CPoly::one());
        let p = (c.clone() + CPoly::one()) * (c - CPoly::one());
        assert_eq!(p, CPoly::c_pow(2) - CPoly::one());
    }

    #[test]
    fn json_roundtrip() {
        let p = CPoly::monomial(ratio(-7, 25), 4) + CPoly::monomial(ratio(2, 1), -2);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"c_powers":{"-2":"2","4":"-7/25"}}"#);
        assert_eq!(serde_json::from_str::<CPoly>(&text).unwrap(), p);
    }

    #[test]
    fn powers_above() {
        let p = CPoly::monomial(ratio(1, 1), 4) + CPoly::monomial(ratio(1, 1), 2) + CPoly::c_pow(-1);
        assert_eq!(p.powers_above(2), vec![4]);
        assert!(p.powers_above(4).is_empty());
    }
}
