//! Fixed 3-dimensional tensors over a generic scalar.
//!
//! Symmetric matrices keep six components in the order xx, yy, zz, xy, xz, yz
//! but every accessor exposes full-matrix semantics.

use std::ops::{Add, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec3<T>(pub [T; 3]);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sym3<T>(pub [T; 6]);

/// General 3×3 matrix, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

/// Storage slot of `(i, j)` in a [`Sym3`].
pub const fn sym_index(i: usize, j: usize) -> usize {
    match (i, j) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) | (1, 0) => 3,
        (0, 2) | (2, 0) => 4,
        _ => 5,
    }
}

/// Row/column pair stored in slot `k` of a [`Sym3`].
pub const SYM_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

impl<T: Scalar> Vec3<T> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| T::zero()))
    }

    pub fn new(x: T, y: T, z: T) -> Self {
        Self([x, y, z])
    }

    pub fn unit(i: usize) -> Self {
        let mut v = Self::zero();
        v.0[i] = T::one();
        v
    }

    pub fn from_fn(f: impl FnMut(usize) -> T) -> Self {
        Self(std::array::from_fn(f))
    }

    pub fn dot(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            acc += self.0[i].clone() * other.0[i].clone();
        }
        acc
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn scaled(&self, k: &T) -> Self {
        Self::from_fn(|i| self.0[i].clone() * k.clone())
    }

    /// Symmetric outer product `a ⊗ b + b ⊗ a`.
    pub fn sym_outer2(&self, other: &Self) -> Sym3<T> {
        Sym3::from_fn(|i, j| {
            self.0[i].clone() * other.0[j].clone() + self.0[j].clone() * other.0[i].clone()
        })
    }

    /// `a ⊗ a`.
    pub fn outer_self(&self) -> Sym3<T> {
        Sym3::from_fn(|i, j| self.0[i].clone() * self.0[j].clone())
    }

    pub fn outer(&self, other: &Self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.0[i].clone() * other.0[j].clone())
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Vec3<U> {
        Vec3(self.0.each_ref().map(f))
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = rhs.0;
        Self([a + x, b + y, c + z])
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let [a, b, c] = self.0;
        let [x, y, z] = rhs.0;
        Self([a - x, b - y, c - z])
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl<T: Scalar> Mul<T> for Vec3<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self(self.0.map(|x| x * k.clone()))
    }
}

impl<T: Scalar> Sym3<T> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| T::zero()))
    }

    pub fn identity() -> Self {
        Self::diag(T::one(), T::one(), T::one())
    }

    pub fn diag(x: T, y: T, z: T) -> Self {
        Self([x, y, z, T::zero(), T::zero(), T::zero()])
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self(std::array::from_fn(|k| {
            let (i, j) = SYM_PAIRS[k];
            f(i, j)
        }))
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.0[sym_index(i, j)]
    }

    pub fn trace(&self) -> T {
        self.0[0].clone() + self.0[1].clone() + self.0[2].clone()
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3::from_fn(|i| {
            let mut acc = T::zero();
            for j in 0..3 {
                acc += self.get(i, j).clone() * v.0[j].clone();
            }
            acc
        })
    }

    /// `uᵀ A v`.
    pub fn quad(&self, u: &Vec3<T>, v: &Vec3<T>) -> T {
        u.dot(&self.mul_vec(v))
    }

    /// Product of two symmetric matrices that commute (powers of one matrix).
    pub fn mul_commuting(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = T::zero();
            for k in 0..3 {
                acc += self.get(i, k).clone() * other.get(k, j).clone();
            }
            acc
        })
    }

    pub fn to_mat(&self) -> Mat3<T> {
        Mat3::from_fn(|i, j| self.get(i, j).clone())
    }

    /// Full double contraction `A_ij B_ij` over all nine index pairs.
    pub fn contract(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += self.get(i, j).clone() * other.get(i, j).clone();
            }
        }
        acc
    }

    pub fn scaled(&self, k: &T) -> Self {
        Self(self.0.clone().map(|x| x * k.clone()))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Sym3<U> {
        Sym3(self.0.each_ref().map(f))
    }

    /// `R A Rᵀ`.
    pub fn rotated(&self, r: &Mat3<T>) -> Self {
        let a = self.to_mat();
        let rar = r.mul(&a).mul(&r.transpose());
        Self::from_fn(|i, j| rar.0[i][j].clone())
    }
}

impl<T: Scalar> Add for Sym3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        out
    }
}

impl<T: Scalar> Sub for Sym3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        out
    }
}

impl<T: Scalar> Neg for Sym3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(self.0.map(|x| -x))
    }
}

impl<T: Scalar> Mat3<T> {
    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| std::array::from_fn(|_| T::zero())))
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self(std::array::from_fn(|i| std::array::from_fn(|j| f(i, j))))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            let mut acc = T::zero();
            for k in 0..3 {
                acc += self.0[i][k].clone() * other.0[k][j].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        Vec3::from_fn(|i| {
            let mut acc = T::zero();
            for j in 0..3 {
                acc += self.0[i][j].clone() * v.0[j].clone();
            }
            acc
        })
    }

    pub fn trace(&self) -> T {
        self.0[0][0].clone() + self.0[1][1].clone() + self.0[2][2].clone()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Mat3<U> {
        Mat3(self.0.each_ref().map(|row| row.each_ref().map(&mut f)))
    }
}

impl<T: Scalar> Add for Mat3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() + rhs.0[i][j].clone())
    }
}

impl<T: Scalar> Sub for Mat3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].clone() - rhs.0[i][j].clone())
    }
}

impl Mat3<f64> {
    /// Largest deviation of `RᵀR` from the identity.
    pub fn orthogonality_defect(&self) -> f64 {
        let rtr = self.transpose().mul(self);
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((rtr.0[i][j] - target).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

impl Sym3<f64> {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

impl Vec3<f64> {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_storage_order() {
        let a = Sym3([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(*a.get(0, 1), 4.0);
        assert_eq!(*a.get(2, 0), 5.0);
        assert_eq!(*a.get(2, 1), 6.0);
        assert_eq!(a.trace(), 6.0);
    }

    #[test]
    fn contraction_counts_off_diagonals_twice() {
        let a = Sym3([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(a.contract(&a), 3.0);
    }

    #[test]
    fn rotation_by_identity_is_noop() {
        let a = Sym3([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(a.rotated(&Mat3::identity()), a);
    }
}
