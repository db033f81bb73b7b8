//! The exact closure: invariant scalars `X₁…X₈`, generator vectors `V₀…V₃`
//! and the potentials `h′`, `φ′ₖ` for a given material model.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::material::Material;
use crate::scalar::Scalar;
use crate::state::MultiplierState;
use crate::tensor::{Sym3, Vec3};

/// The eight scalars `X₁…X₈` on which the material functions depend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XSet<T>(pub [T; 8]);

impl<T> XSet<T> {
    /// `X_n` with the 1-based numbering used throughout.
    pub fn x(&self, n: usize) -> &T {
        &self.0[n - 1]
    }
}

/// Generator vectors `V₀…V₃` of the flux potential.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VSet<T>(pub [Vec3<T>; 4]);

/// `h′` and `φ′ₖ` at one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Potentials<T> {
    pub hprime: T,
    pub phiprime: Vec3<T>,
}

/// Weight of `Hⱼ X_{j+1}` in `h′`.
///
/// These are the time components of the four limiting 4-vectors, and the
/// only weights for which both Galilean residuals vanish.
pub const HPRIME_WEIGHTS: [(i64, i64); 4] = [(8, 1), (1, 1), (1, 1), (1, 1)];

/// Alternative weights `8, −1, −2/3, −1/2` found in the literature display of
/// `h′`. Kept for comparison only: they break the flux-side Galilean identity.
pub const PUBLISHED_HPRIME_WEIGHTS: [(i64, i64); 4] = [(8, 1), (-1, 1), (-2, 3), (-1, 2)];

/// Contractions of the multiplier blocks shared by the X and V formulas.
struct Contractions<T> {
    lam: T,
    s: T,
    ll: T,
    tr2: T,
    tr3: T,
    aa: T,
    ab: T,
    bb: T,
    ama: T,
    amb: T,
    bmb: T,
    am2a: T,
    am2b: T,
    bm2b: T,
    am3b: T,
    a: Vec3<T>,
    b: Vec3<T>,
    ma: Vec3<T>,
    m2a: Vec3<T>,
    mb: Vec3<T>,
    m2b: Vec3<T>,
    m3b: Vec3<T>,
}

impl<T: Scalar> Contractions<T> {
    fn new(s: &MultiplierState<T>) -> Self {
        let m: &Sym3<T> = &s.lambda_ij;
        let m2 = m.mul_commuting(m);
        let m3 = m2.mul_commuting(m);
        let a = s.lambda_i.clone();
        let b = s.lambda_ill.clone();
        let ma = m.mul_vec(&a);
        let m2a = m2.mul_vec(&a);
        let mb = m.mul_vec(&b);
        let m2b = m2.mul_vec(&b);
        let m3b = m3.mul_vec(&b);
        Self {
            lam: s.lambda.clone(),
            s: s.lambda_ppll.clone(),
            ll: m.trace(),
            tr2: m2.trace(),
            tr3: m3.trace(),
            aa: a.dot(&a),
            ab: a.dot(&b),
            bb: b.dot(&b),
            ama: a.dot(&ma),
            amb: a.dot(&mb),
            bmb: b.dot(&mb),
            am2a: a.dot(&m2a),
            am2b: a.dot(&m2b),
            bm2b: b.dot(&m2b),
            am3b: a.dot(&m3b),
            a,
            b,
            ma,
            m2a,
            mb,
            m2b,
            m3b,
        }
    }
}

fn q<T: Scalar>(num: i64, den: i64) -> T {
    T::from_ratio(num, den)
}

/// `Σ coeffᵢ · vᵢ`.
fn combine<T: Scalar>(terms: Vec<(T, &Vec3<T>)>) -> Vec3<T> {
    terms
        .into_iter()
        .fold(Vec3::zero(), |acc, (k, v)| acc + v.scaled(&k))
}

pub fn compute_x<T: Scalar>(state: &MultiplierState<T>) -> XSet<T> {
    let c = Contractions::new(state);
    let Contractions {
        lam, s, ll, tr2, tr3, aa, ab, bb, ama, amb, bmb, am2a, am2b, bm2b, am3b, ..
    } = c;
    let ll2 = ll.square();
    let ll3 = ll.powi(3);
    let quartic_core =
        q::<T>(-37, 375) * ll3.clone() + q::<T>(2, 5) * ll.clone() * tr2.clone() - q::<T>(1, 3) * tr3.clone();

    let x1 = s.clone();
    let x2 = q::<T>(2, 1) * bb.clone() - q::<T>(16, 5) * s.clone() * ll.clone();
    let x3 = q::<T>(8, 1) * s.clone() * (q::<T>(11, 50) * ll2.clone() - q::<T>(1, 2) * tr2.clone())
        + q::<T>(2, 1) * bmb.clone()
        - q::<T>(6, 5) * ll.clone() * bb.clone();
    let x4 = q::<T>(2, 1) * bm2b.clone() - tr2.clone() * bb.clone()
        - q::<T>(8, 5) * ll.clone() * bmb.clone()
        + q::<T>(17, 25) * ll2.clone() * bb.clone()
        + q::<T>(8, 1) * s.clone() * quartic_core.clone();
    let x5 = q::<T>(-2, 5) * ll2.clone() + q::<T>(16, 1) * s.clone() * lam.clone()
        - q::<T>(4, 1) * ab.clone()
        + q::<T>(2, 1) * tr2.clone();
    let x6 = q::<T>(4, 1) * lam.clone() * bb.clone()
        + q::<T>(8, 1) * s.clone() * (q::<T>(-4, 5) * lam.clone() * ll.clone() + q::<T>(1, 2) * aa.clone())
        + q::<T>(8, 5) * ll.clone() * ab.clone()
        - q::<T>(4, 5) * ll.clone() * tr2.clone()
        + q::<T>(8, 75) * ll3.clone()
        - q::<T>(4, 1) * amb.clone()
        + q::<T>(4, 3) * tr3.clone();
    let x7 = q::<T>(8, 15) * tr3.clone() * ll.clone() - q::<T>(14, 25) * ll2.clone() * tr2.clone()
        + q::<T>(46, 375) * ll.powi(4)
        + q::<T>(4, 1) * lam.clone() * bmb.clone()
        + q::<T>(2, 1) * tr2.clone() * ab.clone()
        - ab.square()
        - q::<T>(12, 5) * lam.clone() * ll.clone() * bb.clone()
        + aa.clone() * bb.clone()
        - q::<T>(4, 1) * am2b.clone()
        - q::<T>(8, 1)
            * s.clone()
            * (lam.clone() * tr2.clone() - q::<T>(1, 2) * ama.clone()
                - q::<T>(11, 25) * lam.clone() * ll2.clone()
                + q::<T>(3, 10) * ll.clone() * aa.clone())
        + q::<T>(12, 5) * ll.clone() * amb.clone()
        - q::<T>(22, 25) * ll2.clone() * ab.clone();
    let x8 = q::<T>(-34, 25) * ll2.clone() * amb.clone()
        + q::<T>(2, 1) * tr2.clone() * amb.clone()
        + q::<T>(16, 5) * ll.clone() * am2b.clone()
        + q::<T>(148, 375) * ll3.clone() * ab.clone()
        - q::<T>(8, 5) * ll.clone() * tr2.clone() * ab.clone()
        + q::<T>(4, 3) * tr3.clone() * ab.clone()
        - q::<T>(4, 1) * am3b
        + q::<T>(2, 1)
            * s.clone()
            * (q::<T>(2, 1) * am2a - tr2.clone() * aa.clone()
                - q::<T>(8, 5) * ll.clone() * ama.clone()
                + q::<T>(17, 25) * ll2.clone() * aa.clone())
        + ama * bb.clone()
        - q::<T>(4, 5) * ll.clone() * aa.clone() * bb.clone()
        - q::<T>(2, 1) * ab.clone() * amb
        + q::<T>(4, 5) * ll.clone() * ab.square()
        + aa * bmb.clone()
        + q::<T>(4, 1) * lam.clone() * bm2b
        - q::<T>(2, 1) * lam.clone() * tr2.clone() * bb.clone()
        - q::<T>(16, 5) * lam.clone() * ll.clone() * bmb
        + q::<T>(34, 25) * lam.clone() * ll2.clone() * bb
        + q::<T>(16, 1) * lam * s * quartic_core
        + q::<T>(4, 75) * ll2.clone() * tr3
        - q::<T>(8, 125) * ll3 * tr2
        + q::<T>(4 * 37, 15 * 625) * ll.powi(5);
    XSet([x1, x2, x3, x4, x5, x6, x7, x8])
}

pub fn compute_v<T: Scalar>(state: &MultiplierState<T>) -> VSet<T> {
    let c = Contractions::new(state);
    let Contractions { s, ll, tr2, tr3, ab, bb, amb, bmb, a, b, ma, m2a, mb, m2b, m3b, .. } = c;
    let ll2 = ll.square();

    let v0 = b.scaled(&q(-2, 1));
    let v1 = combine(vec![
        (q(-2, 1), &mb),
        (q::<T>(4, 1) * s.clone(), &a),
        (q::<T>(4, 5) * ll.clone(), &b),
    ]);
    let v2 = combine(vec![
        (q(-2, 1), &m2b),
        (q::<T>(6, 5) * ll.clone(), &mb),
        (q::<T>(4, 1) * s.clone(), &ma),
        (q::<T>(-11, 25) * ll2.clone() - ab.clone() + tr2.clone(), &b),
        (bb.clone() - q::<T>(12, 5) * s.clone() * ll.clone(), &a),
    ]);
    let two_s = q::<T>(2, 1) * s;
    let v3 = combine(vec![
        (two_s.clone() * q(2, 1), &m2a),
        (
            two_s.clone() * (q::<T>(17, 25) * ll2.clone() - tr2.clone())
                - q::<T>(4, 5) * ll.clone() * bb.clone()
                + bmb,
            &a,
        ),
        (two_s * q(-8, 5) * ll.clone() + bb, &ma),
        (q::<T>(-17, 25) * ll2 - ab.clone() + tr2.clone(), &mb),
        (q::<T>(8, 5) * ll.clone(), &m2b),
        (
            q::<T>(4, 5) * ll.clone() * ab + q::<T>(74, 375) * ll.powi(3)
                - q::<T>(4, 5) * ll * tr2
                - amb
                + q::<T>(2, 3) * tr3,
            &b,
        ),
        (q(-2, 1), &m3b),
    ]);
    VSet([v0, v1, v2, v3])
}

/// `h′ = Σ wⱼ Hⱼ X_{j+1}` and `φ′ = Σ Hⱼ Vⱼ` with `Hⱼ` evaluated at `X(state)`.
pub fn eval_potentials<T: Scalar, M: Material + ?Sized>(
    state: &MultiplierState<T>,
    mat: &M,
) -> Result<Potentials<T>> {
    eval_potentials_weighted(state, mat, &HPRIME_WEIGHTS)
}

pub fn eval_potentials_weighted<T: Scalar, M: Material + ?Sized>(
    state: &MultiplierState<T>,
    mat: &M,
    weights: &[(i64, i64); 4],
) -> Result<Potentials<T>> {
    let x = compute_x(state);
    let v = compute_v(state);
    let h = mat.eval(&x)?;
    Ok(assemble(&x, &v, &h, weights))
}

pub(crate) fn assemble<T: Scalar>(
    x: &XSet<T>,
    v: &VSet<T>,
    h: &[T; 4],
    weights: &[(i64, i64); 4],
) -> Potentials<T> {
    let mut hprime = T::zero();
    let mut phiprime = Vec3::zero();
    for j in 0..4 {
        let (num, den) = weights[j];
        hprime += h[j].clone().scale(num, den) * x.0[j].clone();
        phiprime = phiprime + v.0[j].scaled(&h[j]);
    }
    Potentials { hprime, phiprime }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::PolynomialMaterial;
    use crate::scalar::{ratio, Rational};

    fn zero_q() -> Rational {
        ratio(0, 1)
    }

    #[test]
    fn only_ppll_survives_in_x1() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ppll = ratio(3, 7);
        let x = compute_x(&s);
        assert_eq!(x.x(1), &ratio(3, 7));
        for n in 2..=8 {
            assert_eq!(x.x(n), &zero_q(), "X{n}");
        }
    }

    #[test]
    fn diagonal_unit_matrix_values() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ij = Sym3::diag(ratio(1, 1), zero_q(), zero_q());
        let x = compute_x(&s);
        let expected = [
            zero_q(),
            zero_q(),
            zero_q(),
            zero_q(),
            ratio(8, 5),
            ratio(16, 25),
            ratio(12, 125),
            ratio(16, 3125),
        ];
        assert_eq!(x.0, expected);
    }

    #[test]
    fn single_ill_generator() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ill = Vec3::new(ratio(5, 2), zero_q(), zero_q());
        let v = compute_v(&s);
        assert_eq!(v.0[0], Vec3::new(ratio(-5, 1), zero_q(), zero_q()));
        for j in 1..4 {
            assert_eq!(v.0[j], Vec3::zero(), "V{j}");
        }
    }

    #[test]
    fn zero_state_potentials_vanish() {
        let mat = PolynomialMaterial::constant(0);
        let p = eval_potentials(&MultiplierState::<f64>::zero(), &mat).unwrap();
        assert_eq!(p.hprime, 0.0);
        assert_eq!(p.phiprime, Vec3::zero());
    }

    #[test]
    fn constant_material_reads_off_x1_and_v0() {
        let s = MultiplierState::<Rational>::from_flat(&std::array::from_fn(|i| ratio(i as i64 - 6, 5)));
        let mat = PolynomialMaterial::constant(0);
        let p = eval_potentials(&s, &mat).unwrap();
        assert_eq!(p.hprime, ratio(8, 1) * compute_x(&s).x(1).clone());
        assert_eq!(p.phiprime, compute_v(&s).0[0]);
    }
}
