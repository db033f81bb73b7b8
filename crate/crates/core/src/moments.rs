//! Moments, fluxes, entropy pair and Hessian of `h′`, all obtained by
//! forward-mode differentiation of the potentials over the 14 multipliers.

use nalgebra::{SMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::closure::{eval_potentials, Potentials};
use num_traits::Zero;

use crate::dual::{hessian, Dual};
use crate::error::Result;
use crate::material::Material;
use crate::scalar::Scalar;
use crate::state::{coord, MultiplierState, DIM};
use crate::tensor::{Mat3, Sym3, Vec3};

/// Densities `F_A = ∂h′/∂λ_A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSet<T> {
    #[serde(rename = "F")]
    pub f: T,
    #[serde(rename = "F_i")]
    pub f_i: Vec3<T>,
    #[serde(rename = "F_ij")]
    pub f_ij: Sym3<T>,
    #[serde(rename = "F_ill")]
    pub f_ill: Vec3<T>,
    #[serde(rename = "F_iill")]
    pub f_iill: T,
}

/// Fluxes `G_kA = ∂φ′ₖ/∂λ_A`; the first index of every block is `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxSet<T> {
    #[serde(rename = "G_k")]
    pub g_k: Vec3<T>,
    #[serde(rename = "G_ki")]
    pub g_ki: Mat3<T>,
    #[serde(rename = "G_kij")]
    pub g_kij: [Sym3<T>; 3],
    #[serde(rename = "G_kill")]
    pub g_kill: Mat3<T>,
    #[serde(rename = "G_kiill")]
    pub g_kiill: Vec3<T>,
}

impl<T: Scalar> MomentSet<T> {
    pub fn zero() -> Self {
        Self::from_stored_gradient(&std::array::from_fn(|_| T::zero()))
    }

    /// Blocks from a gradient over the 14 stored coordinates. Off-diagonal
    /// entries of the symmetric block are halved, so that
    /// `dh′ = F_ij dλ_ij` holds with the full nine-term contraction.
    pub fn from_stored_gradient(g: &[T; DIM]) -> Self {
        Self {
            f: g[coord::LAMBDA].clone(),
            f_i: Vec3::from_fn(|i| g[coord::LAMBDA_I + i].clone()),
            f_ij: Sym3(std::array::from_fn(|n| {
                let v = g[coord::LAMBDA_IJ + n].clone();
                if n < 3 {
                    v
                } else {
                    v.scale(1, 2)
                }
            })),
            f_ill: Vec3::from_fn(|i| g[coord::LAMBDA_ILL + i].clone()),
            f_iill: g[coord::LAMBDA_PPLL].clone(),
        }
    }

    /// Inverse of [`MomentSet::from_stored_gradient`].
    pub fn to_stored_gradient(&self) -> [T; DIM] {
        std::array::from_fn(|n| match n {
            coord::LAMBDA => self.f.clone(),
            1..=3 => self.f_i.0[n - 1].clone(),
            4..=6 => self.f_ij.0[n - 4].clone(),
            7..=9 => self.f_ij.0[n - 4].clone().scale(2, 1),
            10..=12 => self.f_ill.0[n - 10].clone(),
            _ => self.f_iill.clone(),
        })
    }

    /// `λ F + λᵢ Fᵢ + λᵢⱼ Fᵢⱼ + λᵢₗₗ Fᵢₗₗ + λ_ppll F_iill`.
    pub fn pair(&self, state: &MultiplierState<T>) -> T {
        state.pair(&self.f, &self.f_i, &self.f_ij, &self.f_ill, &self.f_iill)
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> MomentSet<U> {
        MomentSet {
            f: f(&self.f),
            f_i: self.f_i.map(&mut f),
            f_ij: self.f_ij.map(&mut f),
            f_ill: self.f_ill.map(&mut f),
            f_iill: f(&self.f_iill),
        }
    }
}

impl<T: Scalar> FluxSet<T> {
    pub fn zero() -> Self {
        Self::from_components(std::array::from_fn(|_| MomentSet::zero()))
    }

    /// Assemble from the three per-`k` blocks `∂φ′ₖ/∂λ_A`.
    pub fn from_components(parts: [MomentSet<T>; 3]) -> Self {
        Self {
            g_k: Vec3::from_fn(|k| parts[k].f.clone()),
            g_ki: Mat3::from_fn(|k, i| parts[k].f_i.0[i].clone()),
            g_kij: std::array::from_fn(|k| parts[k].f_ij.clone()),
            g_kill: Mat3::from_fn(|k, i| parts[k].f_ill.0[i].clone()),
            g_kiill: Vec3::from_fn(|k| parts[k].f_iill.clone()),
        }
    }

    /// The blocks belonging to flux component `k`.
    pub fn component(&self, k: usize) -> MomentSet<T> {
        MomentSet {
            f: self.g_k.0[k].clone(),
            f_i: Vec3(self.g_ki.0[k].clone()),
            f_ij: self.g_kij[k].clone(),
            f_ill: Vec3(self.g_kill.0[k].clone()),
            f_iill: self.g_kiill.0[k].clone(),
        }
    }

    pub fn components(&self) -> [MomentSet<T>; 3] {
        std::array::from_fn(|k| self.component(k))
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> FluxSet<U> {
        FluxSet::from_components(self.components().map(|c| c.map(&mut f)))
    }
}

impl MomentSet<f64> {
    pub fn max_abs(&self) -> f64 {
        self.to_stored_gradient().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl FluxSet<f64> {
    pub fn max_abs(&self) -> f64 {
        self.components().iter().map(MomentSet::max_abs).fold(0.0, f64::max)
    }
}

/// Potentials together with their gradients over the stored coordinates.
#[derive(Clone, Debug)]
pub struct PotentialJet<T> {
    pub potentials: Potentials<T>,
    pub grad_h: [T; DIM],
    pub grad_phi: [[T; DIM]; 3],
}

impl<T: Scalar> PotentialJet<T> {
    pub fn moments(&self) -> MomentSet<T> {
        MomentSet::from_stored_gradient(&self.grad_h)
    }

    pub fn fluxes(&self) -> FluxSet<T> {
        FluxSet::from_components(std::array::from_fn(|k| {
            MomentSet::from_stored_gradient(&self.grad_phi[k])
        }))
    }
}

/// Seed every stored coordinate of `state` as an independent dual variable.
pub fn seed_state<T: Scalar>(state: &MultiplierState<T>) -> MultiplierState<Dual<T, DIM>> {
    let flat = state.to_flat();
    MultiplierState::from_flat(&std::array::from_fn(|i| Dual::variable(flat[i].clone(), i)))
}

/// `h′`, `φ′` and all their first derivatives in one forward pass.
pub fn potential_jet<T: Scalar, M: Material>(
    state: &MultiplierState<T>,
    mat: &M,
) -> Result<PotentialJet<T>> {
    let p = eval_potentials(&seed_state(state), mat)?;
    let [p0, p1, p2] = p.phiprime.0;
    Ok(PotentialJet {
        potentials: Potentials {
            hprime: p.hprime.re,
            phiprime: Vec3([p0.re, p1.re, p2.re]),
        },
        grad_h: p.hprime.eps,
        grad_phi: [p0.eps, p1.eps, p2.eps],
    })
}

pub fn moments_f<T: Scalar, M: Material>(state: &MultiplierState<T>, mat: &M) -> Result<MomentSet<T>> {
    Ok(potential_jet(state, mat)?.moments())
}

pub fn fluxes_g<T: Scalar, M: Material>(state: &MultiplierState<T>, mat: &M) -> Result<FluxSet<T>> {
    Ok(potential_jet(state, mat)?.fluxes())
}

/// `∂φ′ₖ/∂λ − ∂h′/∂λₖ`, i.e. `G_k − F_k`.
pub fn compatibility_residual<T: Scalar, M: Material>(
    state: &MultiplierState<T>,
    mat: &M,
) -> Result<Vec3<T>> {
    let jet = potential_jet(state, mat)?;
    Ok(compatibility_from_jet(&jet))
}

pub fn compatibility_from_jet<T: Scalar>(jet: &PotentialJet<T>) -> Vec3<T> {
    Vec3::from_fn(|k| {
        jet.grad_phi[k][coord::LAMBDA].clone() - jet.grad_h[coord::LAMBDA_I + k].clone()
    })
}

/// Entropy density and flux recovered from the potentials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyPair<T> {
    pub h: T,
    pub phi: Vec3<T>,
}

/// `h = −h′ + λ_A F_A` and `φₖ = −φ′ₖ + λ_A G_kA`.
pub fn entropy_pair<T: Scalar, M: Material>(
    state: &MultiplierState<T>,
    mat: &M,
) -> Result<EntropyPair<T>> {
    let jet = potential_jet(state, mat)?;
    Ok(entropy_from_jet(state, &jet))
}

pub fn entropy_from_jet<T: Scalar>(state: &MultiplierState<T>, jet: &PotentialJet<T>) -> EntropyPair<T> {
    let flux = jet.fluxes();
    EntropyPair {
        h: jet.moments().pair(state) - jet.potentials.hprime.clone(),
        phi: Vec3::from_fn(|k| flux.component(k).pair(state) - jet.potentials.phiprime.0[k].clone()),
    }
}

/// Second derivatives of `h′` over the stored coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HessianReport {
    pub value: f64,
    pub gradient: [f64; DIM],
    pub matrix: [[f64; DIM]; DIM],
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `max |H − Hᵀ|`.
    pub asymmetry: f64,
}

/// Raw Hessian of `h′` over the stored coordinates (no off-diagonal halving).
pub fn hessian_raw<T: Scalar, M: Material>(
    state: &MultiplierState<T>,
    mat: &M,
) -> Result<(T, [T; DIM], [[T; DIM]; DIM])> {
    let mut err = None;
    let out = hessian(&state.to_flat(), |x| {
        let s = MultiplierState::from_flat(x);
        match eval_potentials(&s, mat) {
            Ok(p) => p.hprime,
            Err(e) => {
                err = Some(e);
                Dual::zero()
            }
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

pub fn hessian_h<M: Material>(state: &MultiplierState<f64>, mat: &M) -> Result<HessianReport> {
    let (value, gradient, matrix) = hessian_raw(state, mat)?;
    let mut asymmetry = 0.0f64;
    for i in 0..DIM {
        for j in 0..DIM {
            asymmetry = asymmetry.max((matrix[i][j] - matrix[j][i]).abs());
        }
    }
    let sym = SMatrix::<f64, DIM, DIM>::from_fn(|i, j| 0.5 * (matrix[i][j] + matrix[j][i]));
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(HessianReport { value, gradient, matrix, eigenvalues, asymmetry })
}

/// Central-difference gradient with step `1e-6·(1+|xᵢ|)`.
pub fn central_difference<F: FnMut(&[f64; DIM]) -> Result<f64>>(
    x: &[f64; DIM],
    mut f: F,
) -> Result<[f64; DIM]> {
    let mut out = [0.0; DIM];
    for i in 0..DIM {
        let h = 1e-6 * (1.0 + x[i].abs());
        let mut xp = *x;
        let mut xm = *x;
        xp[i] += h;
        xm[i] -= h;
        out[i] = (f(&xp)? - f(&xm)?) / (2.0 * h);
    }
    Ok(out)
}

/// `max|a − b| / max(1, max|a|)`: relative to the larger entries, absolute near zero.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{builtin_material, PolynomialMaterial};
    use crate::scalar::{ratio, Rational};

    fn sample_state() -> MultiplierState<f64> {
        MultiplierState::from_flat(&[
            0.3, -0.5, 0.8, 0.1, 0.7, -0.2, 0.4, 0.25, -0.6, 0.15, 0.9, -0.35, 0.45, 0.55,
        ])
    }

    #[test]
    fn linear_potential_gives_constant_fourth_moment() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ppll = ratio(5, 3);
        let f = moments_f(&s, &PolynomialMaterial::constant(0)).unwrap();
        let mut expected = MomentSet::zero();
        expected.f_iill = ratio(8, 1);
        assert_eq!(f, expected);
    }

    #[test]
    fn constant_material_flux_is_minus_two_delta() {
        let g = fluxes_g(&sample_state(), &PolynomialMaterial::constant(0)).unwrap();
        let mut expected = FluxSet::zero();
        expected.g_kill = Mat3::<f64>::identity().map(|x| -2.0 * x);
        assert_eq!(g, expected);
    }

    #[test]
    fn stored_gradient_roundtrip() {
        let g: [f64; DIM] = std::array::from_fn(|i| i as f64 - 3.5);
        assert_eq!(MomentSet::from_stored_gradient(&g).to_stored_gradient(), g);
    }

    #[test]
    fn moments_match_finite_differences() {
        let mat = PolynomialMaterial::quadratic_fixture();
        let s = sample_state();
        let ad = moments_f(&s, &mat).unwrap().to_stored_gradient();
        let fd = central_difference(&s.to_flat(), |x| {
            Ok(eval_potentials(&MultiplierState::from_flat(x), &mat)?.hprime)
        })
        .unwrap();
        assert!(relative_error(&ad, &fd) < 1e-6);
    }

    #[test]
    fn entropy_pair_vanishes_for_linear_potential() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ppll = ratio(-7, 2);
        let e = entropy_pair(&s, &PolynomialMaterial::constant(0)).unwrap();
        assert_eq!(e.h, ratio(0, 1));
        assert_eq!(e.phi, Vec3::zero());
    }

    #[test]
    fn hessian_of_unit_material_is_zero() {
        let r = hessian_h(&sample_state(), &PolynomialMaterial::constant(0)).unwrap();
        assert!(r.matrix.iter().flatten().all(|&x| x == 0.0));
    }

    #[test]
    fn hessian_is_symmetric() {
        let r = hessian_h(&sample_state(), &builtin_material("quadratic").unwrap()).unwrap();
        assert!(r.asymmetry <= 1e-10);
        assert_eq!(r.eigenvalues.len(), DIM);
    }

    #[test]
    fn compatibility_vanishes_for_constants() {
        for j in 0..4 {
            let r = compatibility_residual(&sample_state(), &PolynomialMaterial::constant(j)).unwrap();
            assert!(r.max_abs() <= 1e-12, "constant({j}): {r:?}");
        }
    }

    #[test]
    fn x5_in_first_slot_is_compatible_but_second_slot_is_not() {
        let s = sample_state();
        let mut h0 = PolynomialMaterial::x5_coupled();
        h0.terms.retain(|t| t.target == 1);
        h0.terms[0].target = 0;
        assert!(compatibility_residual(&s, &h0).unwrap().max_abs() <= 1e-12);
        let r = compatibility_residual(&s, &PolynomialMaterial::x5_coupled()).unwrap();
        assert!(r.max_abs() > 1e-3, "{r:?}");
    }
}
