use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::cpoly::CPoly;
use crate::error::Error;
use crate::scalar::{Rational, Scalar};
use crate::state::MultiplierState;

/// Decomposition of the relativistic multipliers into the 14 classical ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Trace part shared between `λ⁰₀` and the spatial diagonal.
    Paper,
    /// The ideal-gas decomposition.
    IdealGas,
    /// Trace-free spatial block plus a separate scalar `ξ`.
    Literature,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Paper, Scheme::IdealGas, Scheme::Literature];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Paper => "paper",
            Scheme::IdealGas => "ideal-gas",
            Scheme::Literature => "literature",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// Metric signature `(−, +, +, +)` used to lower the index of `λᵝ`.
pub const METRIC: [i64; 4] = [-1, 1, 1, 1];

/// Relativistic multipliers `λᵝᵧ` (mixed) and `λᵝ` as series in `c`, with `m₀ = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelEmbedding {
    pub scheme: Scheme,
    /// `tensor[β][γ] = λᵝᵧ` as displayed by the scheme.
    pub tensor: [[CPoly; 4]; 4],
    pub vector: [CPoly; 4],
    /// The separate trace scalar of [`Scheme::Literature`].
    pub xi: Option<CPoly>,
}

fn q(n: i64, d: i64) -> CPoly {
    CPoly::from_ratio(n, d)
}

fn cst(x: &Rational) -> CPoly {
    CPoly::constant(x.clone())
}

fn c(n: i32) -> CPoly {
    CPoly::c_pow(n)
}

/// Build the embedding of a rational multiplier state.
pub fn embed(state: &MultiplierState<Rational>, scheme: Scheme) -> RelEmbedding {
    let lam = cst(&state.lambda);
    let s = cst(&state.lambda_ppll);
    let ll = cst(&state.lambda_ij.trace());
    let a: [CPoly; 3] = std::array::from_fn(|i| cst(&state.lambda_i.0[i]));
    let b: [CPoly; 3] = std::array::from_fn(|i| cst(&state.lambda_ill.0[i]));
    let m = |i: usize, j: usize| cst(state.lambda_ij.get(i, j));
    let lam_c2 = lam.clone() * c(-2);

    let (t00, diag, time_row, time_col, v0, vi, xi): (CPoly, CPoly, Vec<CPoly>, Vec<CPoly>, CPoly, Vec<CPoly>, _) =
        match scheme {
            Scheme::Paper => (
                q(-8, 1) * s.clone() * c(2) + q(2, 3) * ll.clone() - lam_c2.clone(),
                q(-4, 1) * s.clone() * c(2) + q(1, 3) * ll.clone() - lam_c2.clone(),
                b.iter().map(|bj| -bj.clone() * c(1)).collect(),
                b.iter().map(|bi| bi.clone() * c(1)).collect(),
                q(8, 1) * s.clone() * c(3) - q(2, 3) * ll.clone() * c(1),
                (0..3).map(|i| q(-2, 1) * b[i].clone() * c(2) + a[i].clone()).collect(),
                None,
            ),
            Scheme::IdealGas => (
                q(-8, 1) * s.clone() * c(2) - lam_c2.clone(),
                q(-4, 1) * s.clone() * c(2),
                (0..3).map(|j| -b[j].clone() * c(1) - a[j].clone() * q(1, 2) * c(-1)).collect(),
                (0..3).map(|i| b[i].clone() * c(1) + a[i].clone() * q(1, 2) * c(-1)).collect(),
                q(8, 1) * s.clone() * c(3),
                (0..3).map(|i| q(-2, 1) * b[i].clone() * c(2)).collect(),
                None,
            ),
            Scheme::Literature => (
                q(-3, 1) * s.clone() * c(2),
                s.clone() * c(2) - q(1, 3) * ll.clone(),
                b.iter().map(|bj| -bj.clone() * c(1)).collect(),
                b.iter().map(|bi| bi.clone() * c(1)).collect(),
                q(8, 1) * s.clone() * c(3) - q(2, 3) * ll.clone() * c(1),
                (0..3).map(|i| q(-2, 1) * b[i].clone() * c(2) + a[i].clone()).collect(),
                Some(c(4) * (q(5, 1) * s.clone() - q(2, 3) * ll.clone() * c(-2) + lam.clone() * c(-4))),
            ),
        };

    let tensor = std::array::from_fn(|beta| {
        std::array::from_fn(|gamma| match (beta, gamma) {
            (0, 0) => t00.clone(),
            (0, j) => time_row[j - 1].clone(),
            (i, 0) => time_col[i - 1].clone(),
            (i, j) => {
                let mij = m(i - 1, j - 1);
                if i == j {
                    mij + diag.clone()
                } else {
                    mij
                }
            }
        })
    });
    let vector = std::array::from_fn(|beta| if beta == 0 { v0.clone() } else { vi[beta - 1].clone() });
    RelEmbedding { scheme, tensor, vector, xi }
}

pub type Matrix4 = [[CPoly; 4]; 4];

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..4).fold(CPoly::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
    })
}

pub fn mat_vec(a: &Matrix4, v: &[CPoly; 4]) -> [CPoly; 4] {
    std::array::from_fn(|i| (0..4).fold(CPoly::zero(), |acc, k| acc + a[i][k].clone() * v[k].clone()))
}

fn trace(a: &Matrix4) -> CPoly {
    (0..4).fold(CPoly::zero(), |acc, i| acc + a[i][i].clone())
}

fn identity() -> Matrix4 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { CPoly::one() } else { CPoly::zero() }))
}

/// `u_β w^β` with the index of `u` lowered by [`METRIC`].
pub fn lower_dot(u: &[CPoly; 4], w: &[CPoly; 4], metric: &[i64; 4]) -> CPoly {
    (0..4).fold(CPoly::zero(), |acc, k| acc + (u[k].clone() * w[k].clone()).scale(metric[k], 1))
}

impl RelEmbedding {
    /// The tensor entering the invariants. For the literature scheme this is
    /// the displayed tensor with its trace restored, `λᵝᵧ − (ξ/c²)δᵝᵧ`.
    pub fn effective_tensor(&self) -> Matrix4 {
        match &self.xi {
            Some(xi) => self.tensor_with_trace_shift(&(xi.clone() * c(-2))),
            None => self.tensor.clone(),
        }
    }

    /// The displayed tensor with no trace correction at all.
    pub fn displayed_tensor(&self) -> Matrix4 {
        self.tensor.clone()
    }

    fn tensor_with_trace_shift(&self, shift: &CPoly) -> Matrix4 {
        let mut t = self.tensor.clone();
        for (i, row) in t.iter_mut().enumerate() {
            row[i] -= shift.clone();
        }
        t
    }

    /// `T⁰ … T⁴` of the effective tensor.
    pub fn tensor_powers(&self) -> [Matrix4; 5] {
        powers(&self.effective_tensor())
    }
}

pub fn powers(t: &Matrix4) -> [Matrix4; 5] {
    let mut out: [Matrix4; 5] = std::array::from_fn(|_| identity());
    for n in 1..5 {
        out[n] = mat_mul(&out[n - 1], t);
    }
    out
}

/// `Qₙ = tr Tⁿ` for `n = 1…4`; no metric is involved.
pub fn q_scalars_of(t: &Matrix4) -> [CPoly; 4] {
    let p = powers(t);
    std::array::from_fn(|n| trace(&p[n + 1]))
}

/// `Pₙ = (g λ)ᵀ Tⁿ λ` for `n = 0…3`.
pub fn p_scalars_of(t: &Matrix4, v: &[CPoly; 4], metric: &[i64; 4]) -> [CPoly; 4] {
    let p = powers(t);
    std::array::from_fn(|n| lower_dot(v, &mat_vec(&p[n], v), metric))
}

pub fn q_scalars(e: &RelEmbedding) -> [CPoly; 4] {
    q_scalars_of(&e.effective_tensor())
}

pub fn p_scalars(e: &RelEmbedding) -> [CPoly; 4] {
    p_scalars_of(&e.effective_tensor(), &e.vector, &METRIC)
}
