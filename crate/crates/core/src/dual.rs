//! Forward-mode automatic differentiation over a fixed number of directions.
//!
//! `Dual<T, N>` carries a value and `N` first-order perturbations. Nesting
//! (`Dual<Dual<T, N>, N>`) yields exact second derivatives, which is how the
//! Hessian of the potential is obtained. Because the element type is any
//! [`Scalar`], gradients are exact when `T` is rational.

use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Dual<T, const N: usize> {
    pub re: T,
    pub eps: [T; N],
}

impl<T: Scalar, const N: usize> Dual<T, N> {
    pub fn constant(re: T) -> Self {
        Self {
            re,
            eps: std::array::from_fn(|_| T::zero()),
        }
    }

    /// Independent variable number `index` with unit seed.
    pub fn variable(re: T, index: usize) -> Self {
        let mut d = Self::constant(re);
        d.eps[index] = T::one();
        d
    }
}

impl<T: Scalar, const N: usize> Zero for Dual<T, N> {
    fn zero() -> Self {
        Self::constant(T::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.eps.iter().all(Zero::is_zero)
    }
}

impl<T: Scalar, const N: usize> One for Dual<T, N> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Scalar, const N: usize> Neg for Dual<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            eps: self.eps.map(|e| -e),
        }
    }
}

impl<T: Scalar, const N: usize> Add for Dual<T, N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<T: Scalar, const N: usize> Sub for Dual<T, N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl<T: Scalar, const N: usize> Mul for Dual<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let eps = std::array::from_fn(|i| {
            self.re.clone() * rhs.eps[i].clone() + self.eps[i].clone() * rhs.re.clone()
        });
        Self {
            re: self.re * rhs.re,
            eps,
        }
    }
}

impl<T: Scalar, const N: usize> AddAssign for Dual<T, N> {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        for (a, b) in self.eps.iter_mut().zip(rhs.eps) {
            *a += b;
        }
    }
}

impl<T: Scalar, const N: usize> SubAssign for Dual<T, N> {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        for (a, b) in self.eps.iter_mut().zip(rhs.eps) {
            *a -= b;
        }
    }
}

impl<T: Scalar, const N: usize> MulAssign for Dual<T, N> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = self.clone() * rhs;
    }
}

impl<T: Scalar, const N: usize> Scalar for Dual<T, N> {
    fn from_rational(q: &Rational) -> Self {
        Self::constant(T::from_rational(q))
    }

    // Multiplying by a constant does not need the full product rule.
    fn scale(self, num: i64, den: i64) -> Self {
        let k = T::from_ratio(num, den);
        Self {
            re: self.re * k.clone(),
            eps: self.eps.map(|e| e * k.clone()),
        }
    }
}

/// Value and gradient of `f` at `x`.
pub fn gradient<T, const N: usize, F>(x: &[T; N], f: F) -> (T, [T; N])
where
    T: Scalar,
    F: FnOnce(&[Dual<T, N>; N]) -> Dual<T, N>,
{
    let seeded: [Dual<T, N>; N] = std::array::from_fn(|i| Dual::variable(x[i].clone(), i));
    let out = f(&seeded);
    (out.re, out.eps)
}

/// Value, gradient and Hessian of `f` at `x` by nested forward mode.
pub fn hessian<T, const N: usize, F>(x: &[T; N], f: F) -> (T, [T; N], [[T; N]; N])
where
    T: Scalar,
    F: FnOnce(&[Dual<Dual<T, N>, N>; N]) -> Dual<Dual<T, N>, N>,
{
    let seeded: [Dual<Dual<T, N>, N>; N] = std::array::from_fn(|i| {
        let inner = Dual::variable(x[i].clone(), i);
        let mut outer = Dual::constant(inner);
        outer.eps[i] = Dual::one();
        outer
    });
    let out = f(&seeded);
    let value = out.re.re;
    let grad = out.re.eps;
    let hess = std::array::from_fn(|j| std::array::from_fn(|i| out.eps[j].eps[i].clone()));
    (value, grad, hess)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn product_rule() {
        // f(x, y) = x^2 y + 3y
        let (v, g) = gradient(&[2.0_f64, 5.0], |v| {
            let [x, y] = v.clone();
            x.square() * y.clone() + y.scale(3, 1)
        });
        assert_eq!(v, 35.0);
        assert_eq!(g, [20.0, 7.0]);
    }

    #[test]
    fn nested_duals_give_exact_hessian() {
        // f(x, y) = x^3 y^2
        let x = [ratio(1, 2), ratio(-3, 1)];
        let (v, g, h) = hessian(&x, |v| {
            let [a, b] = v.clone();
            a.powi(3) * b.square()
        });
        assert_eq!(v, ratio(9, 8));
        assert_eq!(g, [ratio(27, 4), ratio(-3, 4)]);
        assert_eq!(h[0][0], ratio(27, 1));
        assert_eq!(h[0][1], ratio(-9, 2));
        assert_eq!(h[1][0], ratio(-9, 2));
        assert_eq!(h[1][1], ratio(1, 4));
    }
}
