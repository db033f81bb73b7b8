//! Combinations of the relativistic invariants whose leading `c`-coefficients
//! are the classical X-scalars and V-vectors.

use num_traits::Zero;
use serde_json::{json, Value};

use super::cpoly::CPoly;
use super::embedding::{lower_dot, mat_vec, powers, q_scalars_of, Matrix4, RelEmbedding, METRIC};
use crate::closure::{VSet, XSet};
use crate::error::{Error, Result};
use crate::scalar::{format_rational, ratio, Rational};
use crate::tensor::Vec3;

/// The rational coefficients of every combination, by name.
///
/// `k…k6` remove super-leading powers from the trace invariants, `a…a9`
/// build the corrected 4-vectors, `b1…b5` and `d1, d2` complete the scalar
/// contractions with those vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitCoefficients {
    pub k: Rational,
    pub k1: Rational,
    pub k2: Rational,
    pub k3: Rational,
    pub k4: Rational,
    pub k5: Rational,
    pub k6: Rational,
    pub a: Rational,
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a5: Rational,
    pub a6: Rational,
    pub a7: Rational,
    pub a8: Rational,
    pub a9: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub b3: Rational,
    pub b4: Rational,
    pub b5: Rational,
    pub d1: Rational,
    pub d2: Rational,
}

impl Default for LimitCoefficients {
    fn default() -> Self {
        Self {
            k: ratio(-7, 25),
            k1: ratio(-9, 10),
            k2: ratio(-11, 125),
            k3: ratio(-16, 15),
            k4: ratio(-1, 2),
            k5: ratio(-14, 25),
            k6: ratio(-19, 625),
            a: ratio(-2, 5),
            a1: ratio(-3, 5),
            a2: ratio(2, 25),
            a3: ratio(-1, 2),
            a4: ratio(-4, 5),
            a5: ratio(1, 5),
            a6: ratio(-1, 2),
            a7: ratio(-1, 3),
            a8: ratio(1, 75),
            a9: ratio(2, 5),
            b1: ratio(2, 5),
            b2: ratio(4, 3),
            b3: ratio(4, 15),
            b4: ratio(1, 1),
            b5: ratio(1, 5),
            d1: ratio(4, 25),
            d2: ratio(2, 1),
        }
    }
}

impl LimitCoefficients {
    pub const NAMES: [&'static str; 24] = [
        "k", "k1", "k2", "k3", "k4", "k5", "k6", "a", "a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8",
        "a9", "b1", "b2", "b3", "b4", "b5", "d1", "d2",
    ];

    pub fn get_mut(&mut self, name: &str) -> Result<&mut Rational> {
        Ok(match name {
            "k" => &mut self.k,
            "k1" => &mut self.k1,
            "k2" => &mut self.k2,
            "k3" => &mut self.k3,
            "k4" => &mut self.k4,
            "k5" => &mut self.k5,
            "k6" => &mut self.k6,
            "a" => &mut self.a,
            "a1" => &mut self.a1,
            "a2" => &mut self.a2,
            "a3" => &mut self.a3,
            "a4" => &mut self.a4,
            "a5" => &mut self.a5,
            "a6" => &mut self.a6,
            "a7" => &mut self.a7,
            "a8" => &mut self.a8,
            "a9" => &mut self.a9,
            "b1" => &mut self.b1,
            "b2" => &mut self.b2,
            "b3" => &mut self.b3,
            "b4" => &mut self.b4,
            "b5" => &mut self.b5,
            "d1" => &mut self.d1,
            "d2" => &mut self.d2,
            _ => return Err(Error::UnknownCoefficient(name.to_string())),
        })
    }

    /// Copy with coefficient `name` shifted by `delta`.
    pub fn perturbed(&self, name: &str, delta: &Rational) -> Result<Self> {
        let mut out = self.clone();
        *out.get_mut(name)? += delta;
        Ok(out)
    }
}

/// Divisors turning the `c²` coefficients of `Q₁, C₂, C₃, C₄` into `X₁…X₄`.
pub const X_NORMALIZATION: [(i64, i64); 4] = [(-20, 1), (-1, 1), (-3, 2), (-2, 1)];

/// Eight scalar combinations and their classical limits.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitX {
    pub combinations: [CPoly; 8],
    pub leading: [Rational; 8],
    pub clean: bool,
    /// `(combination index, power)` of every surviving super-leading term.
    pub violations: Vec<(usize, i32)>,
}

/// Four corrected 4-vectors and their classical limits.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitV {
    pub vectors: [[CPoly; 4]; 4],
    /// `c³` coefficients of the time components: `8X₁, X₂, X₃, X₄`.
    pub timelike: [Rational; 4],
    /// `c²` coefficients of the spatial components: `V₀…V₃`.
    pub spatial: [Vec3<Rational>; 4],
    pub clean: bool,
    /// `(vector index, component, power)` of every surviving super-leading term.
    pub violations: Vec<(usize, usize, i32)>,
}

fn strings(q: &[Rational]) -> Vec<String> {
    q.iter().map(format_rational).collect()
}

impl LimitX {
    pub fn as_xset(&self) -> XSet<Rational> {
        XSet(self.leading.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "leading": strings(&self.leading),
            "clean": self.clean,
            "violations": self.violations,
        })
    }
}

impl LimitV {
    pub fn as_vset(&self) -> VSet<Rational> {
        VSet(self.spatial.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "timelike": strings(&self.timelike),
            "spatial": self.spatial.iter().map(|v| strings(&v.0)).collect::<Vec<_>>(),
            "clean": self.clean,
            "violations": self.violations,
        })
    }
}

fn k(q: &Rational) -> CPoly {
    CPoly::constant(q.clone())
}

/// Trace combinations `Q₁, C₂, C₃, C₄` of a tensor.
fn trace_combinations(q: &[CPoly; 4], co: &LimitCoefficients) -> [CPoly; 4] {
    let [q1, q2, q3, q4] = q.clone();
    let c2 = q2 + k(&co.k) * q1.clone() * q1.clone();
    let c3 = q3 + k(&co.k1) * q1.clone() * c2.clone() + k(&co.k2) * q1.clone() * q1.clone() * q1.clone();
    let c4 = q4
        + k(&co.k3) * q1.clone() * c3.clone()
        + k(&co.k4) * c2.clone() * c2.clone()
        + k(&co.k5) * q1.clone() * q1.clone() * c2.clone()
        + k(&co.k6) * q1.clone() * q1.clone() * q1.clone() * q1.clone();
    [q1, c2, c3, c4]
}

/// `λᵅ` and the three corrected vectors `W₁, W₂, W₃`.
fn corrected_vectors(t: &Matrix4, v: &[CPoly; 4], tr: &[CPoly; 4], q3: &CPoly, co: &LimitCoefficients) -> [[CPoly; 4]; 4] {
    let p = powers(t);
    let tv: [[CPoly; 4]; 4] = std::array::from_fn(|n| mat_vec(&p[n], v));
    let [q1, c2, _, _] = tr.clone();
    let comb = |weights: &[CPoly]| -> [CPoly; 4] {
        std::array::from_fn(|beta| {
            weights
                .iter()
                .enumerate()
                .fold(CPoly::zero(), |acc, (n, w)| acc + w.clone() * tv[n][beta].clone())
        })
    };
    let q1sq = q1.clone() * q1.clone();
    let w1 = comb(&[k(&co.a) * q1.clone(), CPoly::c_pow(0)]);
    let w2 = comb(&[
        k(&co.a2) * q1sq.clone() + k(&co.a3) * c2.clone(),
        k(&co.a1) * q1.clone(),
        CPoly::c_pow(0),
    ]);
    let w3 = comb(&[
        k(&co.a7) * q3.clone() + k(&co.a8) * q1sq.clone() * q1.clone() + k(&co.a9) * q1.clone() * c2.clone(),
        k(&co.a5) * q1sq + k(&co.a6) * c2,
        k(&co.a4) * q1,
        CPoly::c_pow(0),
    ]);
    [v.clone(), w1, w2, w3]
}

/// Classical limits of the eight scalar combinations.
pub fn limit_x(e: &RelEmbedding, co: &LimitCoefficients) -> LimitX {
    limit_x_of(&e.effective_tensor(), &e.vector, co)
}

pub fn limit_x_of(t: &Matrix4, v: &[CPoly; 4], co: &LimitCoefficients) -> LimitX {
    let q = q_scalars_of(t);
    let tr = trace_combinations(&q, co);
    let w = corrected_vectors(t, v, &tr, &q[2], co);
    let [q1, c2, c3, c4] = tr.clone();
    let c2p = CPoly::c_pow(2);
    let dot = |x: &[CPoly; 4]| lower_dot(v, x, &METRIC);
    // v·Wₙ already contains the a-coefficient corrections; only the c²-weighted
    // scalar completions remain.
    let s5 = dot(&w[0]) + (k(&co.d1) * q1.clone() * q1.clone() + k(&co.d2) * c2.clone()) * c2p.clone();
    let s6 = dot(&w[1]) + (k(&co.b1) * q1.clone() * c2.clone() + k(&co.b2) * c3.clone()) * c2p.clone();
    let s7 = dot(&w[2]) + (k(&co.b3) * q1.clone() * c3.clone() + k(&co.b4) * c4.clone()) * c2p.clone();
    let s8 = dot(&w[3]) + k(&co.b5) * q1.clone() * c4.clone() * c2p;
    let combinations = [q1, c2, c3, c4, s5, s6, s7, s8];

    let mut violations = Vec::new();
    for (n, p) in combinations.iter().enumerate() {
        violations.extend(p.powers_above(2).into_iter().map(|pw| (n, pw)));
    }
    let leading = std::array::from_fn(|n| {
        let lead = combinations[n].coeff(2);
        match X_NORMALIZATION.get(n) {
            Some(&(num, den)) => lead / ratio(num, den),
            None => lead,
        }
    });
    LimitX { clean: violations.is_empty(), combinations, leading, violations }
}

/// Classical limits of `λᵅ` and the corrected vectors.
pub fn limit_v(e: &RelEmbedding, co: &LimitCoefficients) -> LimitV {
    limit_v_of(&e.effective_tensor(), &e.vector, co)
}

pub fn limit_v_of(t: &Matrix4, v: &[CPoly; 4], co: &LimitCoefficients) -> LimitV {
    let q = q_scalars_of(t);
    let tr = trace_combinations(&q, co);
    let vectors = corrected_vectors(t, v, &tr, &q[2], co);
    let mut violations = Vec::new();
    for (n, w) in vectors.iter().enumerate() {
        for (beta, comp) in w.iter().enumerate() {
            let top = if beta == 0 { 3 } else { 2 };
            violations.extend(comp.powers_above(top).into_iter().map(|pw| (n, beta, pw)));
        }
    }
    let timelike = std::array::from_fn(|n| vectors[n][0].coeff(3));
    let spatial = std::array::from_fn(|n| Vec3::from_fn(|i| vectors[n][i + 1].coeff(2)));
    LimitV { clean: violations.is_empty(), vectors, timelike, spatial, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::{compute_v, compute_x};
    use crate::cseries::embedding::{embed, Scheme};
    use crate::state::MultiplierState;

    fn q(n: i64, d: i64) -> Rational {
        ratio(n, d)
    }

    fn state() -> MultiplierState<Rational> {
        MultiplierState::from_flat(&[
            q(1, 3), q(-2, 5), q(3, 7), q(1, 2), q(-5, 4), q(2, 9), q(7, 8),
            q(1, 6), q(-3, 10), q(4, 11), q(-1, 7), q(5, 12), q(2, 3), q(-3, 13),
        ])
    }

    #[test]
    fn leading_values_are_the_closure_scalars() {
        let s = state();
        let e = embed(&s, Scheme::Paper);
        let lx = limit_x(&e, &LimitCoefficients::default());
        assert!(lx.clean, "{:?}", lx.violations);
        assert_eq!(lx.as_xset(), compute_x(&s));
        let lv = limit_v(&e, &LimitCoefficients::default());
        assert!(lv.clean, "{:?}", lv.violations);
        assert_eq!(lv.as_vset(), compute_v(&s));
        let x = compute_x(&s).0;
        let expected_t = [q(8, 1) * &x[0], x[1].clone(), x[2].clone(), x[3].clone()];
        assert_eq!(lv.timelike, expected_t);
    }

    #[test]
    fn ppll_only() {
        let mut s = MultiplierState::zero();
        s.lambda_ppll = q(5, 2);
        let lx = limit_x(&embed(&s, Scheme::Paper), &LimitCoefficients::default());
        assert!(lx.clean);
        let mut expected: [Rational; 8] = std::array::from_fn(|_| q(0, 1));
        expected[0] = q(5, 2);
        assert_eq!(lx.leading, expected);
    }

    #[test]
    fn corrupting_k_breaks_cleanliness() {
        let co = LimitCoefficients::default().perturbed("k", &q(1, 100)).unwrap();
        assert!(!limit_x(&embed(&state(), Scheme::Paper), &co).clean);
    }

    #[test]
    fn every_coefficient_breaks_cleanliness_when_corrupted() {
        let e = embed(&state(), Scheme::Paper);
        for name in LimitCoefficients::NAMES {
            let co = LimitCoefficients::default().perturbed(name, &q(1, 100)).unwrap();
            let (lx, lv) = (limit_x(&e, &co), limit_v(&e, &co));
            assert!(!(lx.clean && lv.clean), "{name}");
        }
    }

    #[test]
    fn unknown_coefficient_name() {
        assert!(LimitCoefficients::default().perturbed("k7", &q(1, 1)).is_err());
    }
}
