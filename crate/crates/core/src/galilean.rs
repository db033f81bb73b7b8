//! Galilean frame changes: lifting rest-frame moments to a moving frame,
//! boosting multipliers, and the invariance residuals of the potentials.

use serde::{Deserialize, Serialize};

use crate::closure::{compute_x, eval_potentials};
use crate::error::Result;
use crate::material::Material;
use crate::moments::{seed_state, FluxSet, MomentSet};
use crate::scalar::{Rational, Scalar};
use crate::state::MultiplierState;
use crate::tensor::{Mat3, Sym3, Vec3};

/// Rest-frame densities `m_A` and flux parts `M_kA`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InternalMoments<T> {
    pub m: MomentSet<T>,
    #[serde(rename = "M")]
    pub big_m: FluxSet<T>,
}

/// Densities seen from a frame in which the rest frame moves with velocity `v`.
pub fn lift_moments<T: Scalar>(m: &MomentSet<T>, v: &Vec3<T>) -> MomentSet<T> {
    let v2 = v.norm_sq();
    let tr = m.f_ij.trace();
    let mv = m.f_ij.mul_vec(v);
    let m_i_v = m.f_i.dot(v);
    let two = T::from_int(2);
    let four = T::from_int(4);
    MomentSet {
        f: m.f.clone(),
        f_i: v.scaled(&m.f) + m.f_i.clone(),
        f_ij: v.outer_self().scaled(&m.f) + m.f_ij.clone() + m.f_i.sym_outer2(v),
        f_ill: m.f_ill.clone()
            + v.scaled(&tr)
            + mv.scaled(&two)
            + v.scaled(&(m.f.clone() * v2.clone()))
            + m.f_i.scaled(&v2)
            + v.scaled(&(two.clone() * m_i_v.clone())),
        f_iill: m.f_iill.clone()
            + m.f.clone() * v2.square()
            + four.clone() * m_i_v * v2.clone()
            + two * tr * v2
            + four.clone() * m.f_ij.quad(v, v)
            + four * m.f_ill.dot(v),
    }
}

/// Fluxes `G_kA = vₖ F_A + H_kA`, where `H_k` is the lift of the rest-frame
/// flux part `M_k` and `F` the lift of `m`.
pub fn lift_fluxes<T: Scalar>(im: &InternalMoments<T>, v: &Vec3<T>) -> FluxSet<T> {
    let f = lift_moments(&im.m, v);
    FluxSet::from_components(std::array::from_fn(|k| {
        let h = lift_moments(&im.big_m.component(k), v);
        let vk = &v.0[k];
        MomentSet {
            f: vk.clone() * f.f.clone() + h.f,
            f_i: f.f_i.scaled(vk) + h.f_i,
            f_ij: f.f_ij.scaled(vk) + h.f_ij,
            f_ill: f.f_ill.scaled(vk) + h.f_ill,
            f_iill: vk.clone() * f.f_iill.clone() + h.f_iill,
        }
    }))
}

/// Multipliers conjugate to the rest-frame moments:
/// `λ_A F_A(lift(m, v)) = λᴵ_A m_A` for every `m`.
pub fn boost_multipliers<T: Scalar>(s: &MultiplierState<T>, v: &Vec3<T>) -> MultiplierState<T> {
    let a = &s.lambda_i;
    let m = &s.lambda_ij;
    let b = &s.lambda_ill;
    let sc = &s.lambda_ppll;
    let v2 = v.norm_sq();
    let bv = b.dot(v);
    let two = T::from_int(2);
    let four = T::from_int(4);
    let four_s = four.clone() * sc.clone();
    MultiplierState {
        lambda: s.lambda.clone()
            + a.dot(v)
            + m.quad(v, v)
            + bv.clone() * v2.clone()
            + sc.clone() * v2.square(),
        lambda_i: a.clone()
            + m.mul_vec(v).scaled(&two)
            + b.scaled(&v2)
            + v.scaled(&(two.clone() * bv.clone()))
            + v.scaled(&(four_s.clone() * v2.clone())),
        lambda_ij: m.clone()
            + Sym3::identity().scaled(&(bv + two * sc.clone() * v2))
            + b.sym_outer2(v)
            + v.outer_self().scaled(&four_s),
        lambda_ill: b.clone() + v.scaled(&four_s),
        lambda_ppll: sc.clone(),
    }
}

/// A scalar function of the multipliers, evaluable on every backend so that
/// the residual operators can differentiate it.
pub trait ScalarField: Sync {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<T>;
}

/// A pair `(h′, φ′ₖ)` of potentials.
pub trait PotentialField: Sync {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<(T, Vec3<T>)>;
}

/// `X_n`, 1-based.
#[derive(Clone, Copy, Debug)]
pub struct XScalar(pub usize);

impl ScalarField for XScalar {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<T> {
        Ok(compute_x(s).0[self.0 - 1].clone())
    }
}

/// `h′` of the closure with material `M`.
pub struct HPrime<'a, M>(pub &'a M);

impl<M: Material> ScalarField for HPrime<'_, M> {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<T> {
        Ok(eval_potentials(s, self.0)?.hprime)
    }
}

/// The closure potentials with material `M`.
pub struct Closure<'a, M>(pub &'a M);

impl<M: Material> PotentialField for Closure<'_, M> {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<(T, Vec3<T>)> {
        let p = eval_potentials(s, self.0)?;
        Ok((p.hprime, p.phiprime))
    }
}

/// `λₐλₐ`: an isotropic scalar that is not a function of the X-scalars.
#[derive(Clone, Copy, Debug)]
pub struct LambdaINormSq;

impl ScalarField for LambdaINormSq {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<T> {
        Ok(s.lambda_i.norm_sq())
    }
}

/// `h′ = 0`, `φ′ₖ = λₖ`: a flux potential outside the closure.
#[derive(Clone, Copy, Debug)]
pub struct LambdaIFlux;

impl PotentialField for LambdaIFlux {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<(T, Vec3<T>)> {
        Ok((T::zero(), s.lambda_i.clone()))
    }
}

/// `c₁f₁ + c₂f₂`, used to check linearity of the residual operators.
pub struct LinearCombination<A, B> {
    pub first: (Rational, A),
    pub second: (Rational, B),
}

impl<A: ScalarField, B: ScalarField> ScalarField for LinearCombination<A, B> {
    fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<T> {
        let c1 = T::from_rational(&self.first.0);
        let c2 = T::from_rational(&self.second.0);
        Ok(c1 * self.first.1.eval(s)? + c2 * self.second.1.eval(s)?)
    }
}

/// Residual together with the magnitude of the largest term entering it.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual<R> {
    pub value: R,
    pub scale: f64,
}

impl Residual<Vec3<f64>> {
    pub fn max_abs(&self) -> f64 {
        self.value.max_abs()
    }

    /// `max|R| / scale`, or zero when every term vanishes.
    pub fn relative(&self) -> f64 {
        relative(self.max_abs(), self.scale)
    }
}

impl Residual<Mat3<f64>> {
    pub fn max_abs(&self) -> f64 {
        self.value.max_abs()
    }

    pub fn relative(&self) -> f64 {
        relative(self.max_abs(), self.scale)
    }
}

fn relative(abs: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        abs / scale
    } else {
        abs
    }
}

/// The five signed vector terms of the invariance operator applied to a
/// function with block gradient `g`:
/// `g_λ λᵢ`, `2λᵢⱼ g_λⱼ`, `λᵢₚₚ tr g_λᵣₛ`, `2 g_λᵢⱼ λⱼₚₚ`, `4λ_ppll g_λᵢₗₗ`.
pub fn residual_terms<T: Scalar>(s: &MultiplierState<T>, g: &MomentSet<T>) -> [Vec3<T>; 5] {
    [
        s.lambda_i.scaled(&g.f),
        s.lambda_ij.mul_vec(&g.f_i).scaled(&T::from_int(2)),
        s.lambda_ill.scaled(&g.f_ij.trace()),
        g.f_ij.mul_vec(&s.lambda_ill).scaled(&T::from_int(2)),
        g.f_ill.scaled(&(T::from_int(4) * s.lambda_ppll.clone())),
    ]
}

fn sum_terms<T: Scalar>(terms: [Vec3<T>; 5]) -> Vec3<T> {
    terms.into_iter().fold(Vec3::zero(), |acc, t| acc + t)
}

/// The invariance operator applied to a function with block gradient `g`.
pub fn residual_from_gradient<T: Scalar>(s: &MultiplierState<T>, g: &MomentSet<T>) -> Vec3<T> {
    sum_terms(residual_terms(s, g))
}

fn scalar_gradient<T: Scalar, F: ScalarField>(s: &MultiplierState<T>, f: &F) -> Result<MomentSet<T>> {
    let out = f.eval(&seed_state(s))?;
    Ok(MomentSet::from_stored_gradient(&out.eps))
}

/// `(∂f/∂λ)λᵢ + 2λᵢⱼ ∂f/∂λⱼ + λⱼₚₚ(tr(∂f/∂λᵣₛ)δᵢⱼ + 2∂f/∂λᵢⱼ) + 4λ_ppll ∂f/∂λᵢₗₗ`.
pub fn galilean_residual_h<T: Scalar, F: ScalarField>(s: &MultiplierState<T>, f: &F) -> Result<Vec3<T>> {
    Ok(residual_from_gradient(s, &scalar_gradient(s, f)?))
}

/// Float residual with its term scale.
pub fn galilean_residual_h_scaled<F: ScalarField>(
    s: &MultiplierState<f64>,
    f: &F,
) -> Result<Residual<Vec3<f64>>> {
    let terms = residual_terms(s, &scalar_gradient(s, f)?);
    let scale = terms.iter().map(Vec3::max_abs).fold(0.0, f64::max);
    Ok(Residual { value: sum_terms(terms), scale })
}

/// Residuals of all eight X-scalars from a single forward pass.
pub fn galilean_residual_x<T: Scalar>(s: &MultiplierState<T>) -> [Vec3<T>; 8] {
    let x = compute_x(&seed_state(s));
    x.0.map(|xi| residual_from_gradient(s, &MomentSet::from_stored_gradient(&xi.eps)))
}

struct FluxJet<T> {
    hprime: T,
    grads: [MomentSet<T>; 3],
}

fn flux_jet<T: Scalar, P: PotentialField>(s: &MultiplierState<T>, p: &P) -> Result<FluxJet<T>> {
    let (h, phi) = p.eval(&seed_state(s))?;
    Ok(FluxJet {
        hprime: h.re,
        grads: phi.0.map(|c| MomentSet::from_stored_gradient(&c.eps)),
    })
}

/// `Rᵢₖ = [invariance operator on φ′ₖ]ᵢ + h′δᵢₖ`.
pub fn galilean_residual_phi<T: Scalar, P: PotentialField>(s: &MultiplierState<T>, p: &P) -> Result<Mat3<T>> {
    let jet = flux_jet(s, p)?;
    let cols = jet.grads.each_ref().map(|g| residual_from_gradient(s, g));
    Ok(Mat3::from_fn(|i, k| {
        let d = if i == k { jet.hprime.clone() } else { T::zero() };
        cols[k].0[i].clone() + d
    }))
}

pub fn galilean_residual_phi_scaled<P: PotentialField>(
    s: &MultiplierState<f64>,
    p: &P,
) -> Result<Residual<Mat3<f64>>> {
    let jet = flux_jet(s, p)?;
    let mut scale = jet.hprime.abs();
    let cols = jet.grads.each_ref().map(|g| {
        let terms = residual_terms(s, g);
        scale = terms.iter().map(Vec3::max_abs).fold(scale, f64::max);
        sum_terms(terms)
    });
    let value = Mat3::from_fn(|i, k| cols[k].0[i] + if i == k { jet.hprime } else { 0.0 });
    Ok(Residual { value, scale })
}

/// Hand-written block gradients of `X₁`, `X₂` and `X₅`, independent of the
/// dual-number path.
pub fn hand_gradient_x<T: Scalar>(s: &MultiplierState<T>, n: usize) -> Option<MomentSet<T>> {
    let mut g = MomentSet::zero();
    let ll = s.lambda_ij.trace();
    match n {
        1 => g.f_iill = T::one(),
        2 => {
            g.f_ill = s.lambda_ill.scaled(&T::from_int(4));
            g.f_ij = Sym3::identity().scaled(&(s.lambda_ppll.clone().scale(-16, 5)));
            g.f_iill = ll.scale(-16, 5);
        }
        5 => {
            g.f = T::from_int(16) * s.lambda_ppll.clone();
            g.f_i = s.lambda_ill.scaled(&T::from_int(-4));
            g.f_ij = Sym3::identity().scaled(&ll.scale(-4, 5)) + s.lambda_ij.scaled(&T::from_int(4));
            g.f_ill = s.lambda_i.scaled(&T::from_int(-4));
            g.f_iill = T::from_int(16) * s.lambda.clone();
        }
        _ => return None,
    }
    Some(g)
}

/// The dual-number gradient of `X_n` in block form.
pub fn dual_gradient_x<T: Scalar>(s: &MultiplierState<T>, n: usize) -> MomentSet<T> {
    let x = compute_x(&seed_state(s));
    MomentSet::from_stored_gradient(&x.0[n - 1].eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::{builtin_material, PolynomialMaterial};
    use crate::scalar::ratio;
    use crate::state::DIM;

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn rational_state() -> MultiplierState<Rational> {
        MultiplierState::from_flat(&[
            q(1, 3), q(-2, 5), q(3, 7), q(1, 2), q(-5, 4), q(2, 9), q(7, 8),
            q(1, 6), q(-3, 10), q(4, 11), q(-1, 7), q(5, 12), q(2, 3), q(-3, 13),
        ])
    }

    fn rational_moments(seed: i64) -> MomentSet<Rational> {
        let g: [Rational; DIM] = std::array::from_fn(|i| q((i as i64 * 7 + seed) % 11 - 5, (i as i64 % 4) + 2));
        MomentSet::from_stored_gradient(&g)
    }

    #[test]
    fn zero_velocity_is_identity() {
        let v = Vec3::<Rational>::zero();
        let s = rational_state();
        assert_eq!(boost_multipliers(&s, &v), s);
        let m = rational_moments(3);
        assert_eq!(lift_moments(&m, &v), m);
        let im = InternalMoments {
            m: m.clone(),
            big_m: FluxSet::from_components([rational_moments(1), rational_moments(2), rational_moments(4)]),
        };
        assert_eq!(lift_fluxes(&im, &v), im.big_m);
    }

    #[test]
    fn density_only_lift() {
        let mut m = MomentSet::<Rational>::zero();
        m.f = q(3, 2);
        let v = Vec3::new(q(1, 2), q(-1, 3), q(2, 1));
        let f = lift_moments(&m, &v);
        let v2 = v.norm_sq();
        assert_eq!(f.f_i, v.scaled(&m.f));
        assert_eq!(f.f_ij, v.outer_self().scaled(&m.f));
        assert_eq!(f.f_ill, v.scaled(&(m.f.clone() * v2.clone())));
        assert_eq!(f.f_iill, m.f * v2.square());
    }

    #[test]
    fn ppll_only_boost() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ppll = q(5, 3);
        let v = Vec3::new(q(1, 2), q(-1, 3), q(2, 1));
        let b = boost_multipliers(&s, &v);
        let sc = s.lambda_ppll.clone();
        let v2 = v.norm_sq();
        assert_eq!(b.lambda, sc.clone() * v2.square());
        assert_eq!(b.lambda_i, v.scaled(&(q(4, 1) * sc.clone() * v2.clone())));
        assert_eq!(
            b.lambda_ij,
            v.outer_self().scaled(&(q(4, 1) * sc.clone())) + Sym3::identity().scaled(&(q(2, 1) * sc.clone() * v2))
        );
        assert_eq!(b.lambda_ill, v.scaled(&(q(4, 1) * sc.clone())));
        assert_eq!(b.lambda_ppll, sc);
    }

    #[test]
    fn pairing_is_frame_invariant() {
        let s = rational_state();
        let m = rational_moments(5);
        let v = Vec3::new(q(2, 3), q(-1, 4), q(5, 7));
        assert_eq!(lift_moments(&m, &v).pair(&s), m.pair(&boost_multipliers(&s, &v)));
    }

    #[test]
    fn boosts_compose() {
        let s = rational_state();
        let v = Vec3::new(q(2, 3), q(-1, 4), q(5, 7));
        let w = Vec3::new(q(-1, 5), q(3, 2), q(1, 9));
        assert_eq!(
            boost_multipliers(&boost_multipliers(&s, &v), &w),
            boost_multipliers(&s, &(v + w))
        );
    }

    #[test]
    fn every_x_scalar_is_invariant_exactly() {
        for (n, r) in galilean_residual_x(&rational_state()).iter().enumerate() {
            assert_eq!(r, &Vec3::zero(), "X{}", n + 1);
        }
    }

    #[test]
    fn closure_is_invariant_exactly() {
        let s = rational_state();
        let mat = builtin_material("quadratic").unwrap();
        assert_eq!(galilean_residual_h(&s, &HPrime(&mat)).unwrap(), Vec3::zero());
        assert_eq!(galilean_residual_phi(&s, &Closure(&mat)).unwrap(), Mat3::zero());
    }

    #[test]
    fn published_weights_break_the_flux_identity() {
        struct Published<'a>(&'a PolynomialMaterial);
        impl PotentialField for Published<'_> {
            fn eval<T: Scalar>(&self, s: &MultiplierState<T>) -> Result<(T, Vec3<T>)> {
                let p = crate::closure::eval_potentials_weighted(
                    s,
                    self.0,
                    &crate::closure::PUBLISHED_HPRIME_WEIGHTS,
                )?;
                Ok((p.hprime, p.phiprime))
            }
        }
        let mat = PolynomialMaterial::constant(1);
        let r = galilean_residual_phi(&rational_state(), &Published(&mat)).unwrap();
        assert_ne!(r, Mat3::zero());
    }

    #[test]
    fn non_closure_probes_are_detected() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_i = Vec3::new(q(1, 1), q(0, 1), q(0, 1));
        s.lambda_ij = Sym3::diag(q(1, 1), q(0, 1), q(0, 1));
        let r = galilean_residual_h(&s, &LambdaINormSq).unwrap();
        assert_eq!(r.0[0], q(4, 1));
        let r = galilean_residual_phi(&rational_state(), &LambdaIFlux).unwrap();
        assert_ne!(r, Mat3::zero());
    }

    #[test]
    fn hand_gradients_agree() {
        let s = rational_state();
        for n in [1, 2, 5] {
            assert_eq!(hand_gradient_x(&s, n).unwrap(), dual_gradient_x(&s, n), "X{n}");
        }
    }
}
