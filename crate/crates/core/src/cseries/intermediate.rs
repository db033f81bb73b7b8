//! Intermediate multipliers `ℓ, η, ℓᵢ, μᵢ, μᵢⱼ` between the classical
//! multipliers and the relativistic embedding.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cpoly::CPoly;
use super::embedding::{RelEmbedding, Scheme, METRIC};
use crate::scalar::{Rational, Scalar};
use crate::state::MultiplierState;
use crate::tensor::{Sym3, Vec3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateMultipliers {
    pub ell: CPoly,
    pub eta: CPoly,
    pub ell_i: Vec3<CPoly>,
    pub mu_i: Vec3<CPoly>,
    pub mu_ij: Sym3<CPoly>,
}

fn c(n: i32) -> CPoly {
    CPoly::c_pow(n)
}

fn q(n: i64, d: i64) -> CPoly {
    CPoly::from_ratio(n, d)
}

impl IntermediateMultipliers {
    /// Intermediate multipliers of a classical state (`c` symbolic).
    pub fn from_state(s: &MultiplierState<Rational>) -> Self {
        let st = s.map(|x| CPoly::constant(x.clone()));
        let sc = st.lambda_ppll.clone();
        let ll = st.lambda_ij.trace();
        let lam = st.lambda.clone();
        let ell = q(-8, 1) * c(4) * sc.clone() + q(2, 3) * c(2) * ll.clone();
        let eta = q(8, 1) * c(4) * sc.clone() - q(2, 3) * c(2) * ll.clone() + lam.clone();
        let mu_i = st.lambda_ill.scaled(&(q(2, 1) * c(2)));
        let ell_i = st.lambda_i.clone() - mu_i.clone();
        let shift = q(4, 1) * c(2) * sc - ll.scale(1, 3) + lam * c(-2);
        let mu_ij = st.lambda_ij.clone() - Sym3::identity().scaled(&shift);
        Self { ell, eta, ell_i, mu_i, mu_ij }
    }

    /// Back to the classical multipliers.
    pub fn to_state(&self) -> MultiplierState<CPoly> {
        let mu_ll = self.mu_ij.trace();
        MultiplierState {
            lambda: self.ell.clone() + self.eta.clone(),
            lambda_i: self.ell_i.clone() + self.mu_i.clone(),
            lambda_ij: self.mu_ij.clone()
                + Sym3::identity().scaled(&(self.ell.clone().scale(1, 2) * c(-2) + self.eta.clone() * c(-2))),
            lambda_ill: self.mu_i.scaled(&(q(1, 2) * c(-2))),
            lambda_ppll: self.eta.clone().scale(1, 4) * c(-4) + mu_ll.scale(1, 12) * c(-2),
        }
    }

    /// Covariant components `λ_β`, `λ_βγ` with `m₀ = 1`.
    pub fn covariant(&self) -> ([CPoly; 4], [[CPoly; 4]; 4]) {
        let vector = std::array::from_fn(|b| if b == 0 { self.ell.clone() * c(-1) } else { self.ell_i.0[b - 1].clone() });
        let tensor = std::array::from_fn(|b| {
            std::array::from_fn(|g| match (b, g) {
                (0, 0) => self.eta.clone() * c(-2),
                (0, j) => self.mu_i.0[j - 1].clone().scale(1, 2) * c(-1),
                (i, 0) => self.mu_i.0[i - 1].clone().scale(1, 2) * c(-1),
                (i, j) => self.mu_ij.get(i - 1, j - 1).clone(),
            })
        });
        (vector, tensor)
    }

    /// Raise the first index with the metric to obtain a mixed embedding.
    pub fn derived_embedding(&self) -> RelEmbedding {
        let (v, t) = self.covariant();
        RelEmbedding {
            scheme: Scheme::Paper,
            tensor: std::array::from_fn(|b| std::array::from_fn(|g| t[b][g].clone().scale(METRIC[b], 1))),
            vector: std::array::from_fn(|b| v[b].clone().scale(METRIC[b], 1)),
            xi: None,
        }
    }
}

/// First component in which two states differ, if any.
pub fn first_mismatch(a: &MultiplierState<CPoly>, b: &MultiplierState<CPoly>) -> Option<usize> {
    let (fa, fb) = (a.to_flat(), b.to_flat());
    (0..fa.len()).find(|&i| !(fa[i].clone() - fb[i].clone()).is_zero())
}
