//! The 14 Lagrange multipliers and their isotropic invariants.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, SchemaError};
use crate::scalar::Scalar;
use crate::tensor::{Mat3, Sym3, Vec3};

/// Number of independent multiplier components.
pub const DIM: usize = 14;

/// Flattened coordinate layout: `λ`, `λ_i` (3), `λ_ij` (6, xx yy zz xy xz yz),
/// `λ_ill` (3), `λ_ppll`.
pub mod coord {
    pub const LAMBDA: usize = 0;
    pub const LAMBDA_I: usize = 1;
    pub const LAMBDA_IJ: usize = 4;
    pub const LAMBDA_ILL: usize = 10;
    pub const LAMBDA_PPLL: usize = 13;

    pub const NAMES: [&str; super::DIM] = [
        "lambda", "lambda_1", "lambda_2", "lambda_3", "lambda_11", "lambda_22", "lambda_33",
        "lambda_12", "lambda_13", "lambda_23", "lambda_1ll", "lambda_2ll", "lambda_3ll",
        "lambda_ppll",
    ];
}

/// Lagrange multipliers `λ, λ_i, λ_ij, λ_ill, λ_ppll`.
///
/// `lambda_ill` is the trace-contracted third-order multiplier and
/// `lambda_ppll` the fully contracted fourth-order one. The scalar `λ` also
/// plays the role of `Λ` in the invariants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierState<T> {
    pub lambda: T,
    pub lambda_i: Vec3<T>,
    pub lambda_ij: Sym3<T>,
    pub lambda_ill: Vec3<T>,
    pub lambda_ppll: T,
}

impl<T: Scalar> MultiplierState<T> {
    pub fn zero() -> Self {
        Self {
            lambda: T::zero(),
            lambda_i: Vec3::zero(),
            lambda_ij: Sym3::zero(),
            lambda_ill: Vec3::zero(),
            lambda_ppll: T::zero(),
        }
    }

    pub fn to_flat(&self) -> [T; DIM] {
        let mut out: [T; DIM] = std::array::from_fn(|_| T::zero());
        out[coord::LAMBDA] = self.lambda.clone();
        out[coord::LAMBDA_I..coord::LAMBDA_I + 3].clone_from_slice(&self.lambda_i.0);
        out[coord::LAMBDA_IJ..coord::LAMBDA_IJ + 6].clone_from_slice(&self.lambda_ij.0);
        out[coord::LAMBDA_ILL..coord::LAMBDA_ILL + 3].clone_from_slice(&self.lambda_ill.0);
        out[coord::LAMBDA_PPLL] = self.lambda_ppll.clone();
        out
    }

    pub fn from_flat(x: &[T; DIM]) -> Self {
        Self {
            lambda: x[coord::LAMBDA].clone(),
            lambda_i: Vec3::from_fn(|i| x[coord::LAMBDA_I + i].clone()),
            lambda_ij: Sym3(std::array::from_fn(|k| x[coord::LAMBDA_IJ + k].clone())),
            lambda_ill: Vec3::from_fn(|i| x[coord::LAMBDA_ILL + i].clone()),
            lambda_ppll: x[coord::LAMBDA_PPLL].clone(),
        }
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> MultiplierState<U> {
        let flat = self.to_flat();
        MultiplierState::from_flat(&flat.each_ref().map(&mut f))
    }

    /// Multiply every component by `t`.
    pub fn scaled(&self, t: &T) -> Self {
        self.map(|x| x.clone() * t.clone())
    }

    /// Full contraction `λ a + λ_i a_i + λ_ij a_ij + λ_ill a_ill + λ_ppll a_iill`
    /// with a set of conjugate blocks.
    pub fn pair(&self, a: &T, a_i: &Vec3<T>, a_ij: &Sym3<T>, a_ill: &Vec3<T>, a_iill: &T) -> T {
        self.lambda.clone() * a.clone()
            + self.lambda_i.dot(a_i)
            + self.lambda_ij.contract(a_ij)
            + self.lambda_ill.dot(a_ill)
            + self.lambda_ppll.clone() * a_iill.clone()
    }
}

impl<T: Scalar + ToPrimitive> MultiplierState<T> {
    pub fn to_f64(&self) -> MultiplierState<f64> {
        self.map(|x| x.to_f64().unwrap_or(f64::NAN))
    }
}

impl MultiplierState<f64> {
    pub fn is_finite(&self) -> bool {
        self.to_flat().iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.to_flat().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Parse the JSON object form, reporting the offending field path.
    pub fn from_json_value(value: &Value, path: &str) -> Result<Self, SchemaError> {
        let obj = value
            .as_object()
            .ok_or_else(|| SchemaError::new(path, "expected a JSON object"))?;
        const KEYS: [&str; 5] = ["lambda", "lambda_i", "lambda_ij", "lambda_ill", "lambda_ppll"];
        if let Some(extra) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(SchemaError::new(&format!("{path}.{extra}"), "unknown field"));
        }
        let field = |name: &str| {
            obj.get(name)
                .ok_or_else(|| SchemaError::new(&format!("{path}.{name}"), "missing field"))
        };
        let lambda = json_number(field("lambda")?, &format!("{path}.lambda"))?;
        let lambda_i = json_array::<3>(field("lambda_i")?, &format!("{path}.lambda_i"))?;
        let lambda_ij = json_array::<6>(field("lambda_ij")?, &format!("{path}.lambda_ij"))?;
        let lambda_ill = json_array::<3>(field("lambda_ill")?, &format!("{path}.lambda_ill"))?;
        let lambda_ppll = json_number(field("lambda_ppll")?, &format!("{path}.lambda_ppll"))?;
        Ok(Self {
            lambda,
            lambda_i: Vec3(lambda_i),
            lambda_ij: Sym3(lambda_ij),
            lambda_ill: Vec3(lambda_ill),
            lambda_ppll,
        })
    }
}

pub(crate) fn json_number(v: &Value, path: &str) -> Result<f64, SchemaError> {
    let x = v
        .as_f64()
        .ok_or_else(|| SchemaError::new(path, "expected a number"))?;
    if !x.is_finite() {
        return Err(SchemaError::new(path, "number must be finite"));
    }
    Ok(x)
}

pub(crate) fn json_array<const N: usize>(v: &Value, path: &str) -> Result<[f64; N], SchemaError> {
    let arr = v
        .as_array()
        .ok_or_else(|| SchemaError::new(path, &format!("expected an array of {N} numbers")))?;
    if arr.len() != N {
        return Err(SchemaError::new(
            path,
            &format!("expected {N} numbers, found {}", arr.len()),
        ));
    }
    let mut out = [0.0; N];
    for (i, x) in arr.iter().enumerate() {
        out[i] = json_number(x, &format!("{path}[{i}]"))?;
    }
    Ok(out)
}

/// The 14 isotropic invariants of a multiplier state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scalar14<T> {
    /// `λ_ll`
    pub trace: T,
    /// `tr λ²`
    pub trace_sq: T,
    /// `tr λ³`
    pub trace_cube: T,
    /// `λ_all λ_all`
    pub ill_ill: T,
    /// `λ_all λ_a`
    pub ill_i: T,
    /// `λ_a λ_a`
    pub i_i: T,
    /// `λ_ab λ_all λ_bll`
    pub ill_m_ill: T,
    /// `λ_ab λ_a λ_bll`
    pub i_m_ill: T,
    /// `λ_ab λ_a λ_b`
    pub i_m_i: T,
    /// `λ²_ab λ_all λ_bll`
    pub ill_m2_ill: T,
    /// `λ²_ab λ_a λ_bll`
    pub i_m2_ill: T,
    /// `λ²_ab λ_a λ_b`
    pub i_m2_i: T,
    pub lambda_ppll: T,
    /// `Λ`, identified with `λ`.
    pub big_lambda: T,
}

impl<T: Scalar> Scalar14<T> {
    pub fn to_array(&self) -> [T; 14] {
        [
            self.trace.clone(),
            self.trace_sq.clone(),
            self.trace_cube.clone(),
            self.ill_ill.clone(),
            self.ill_i.clone(),
            self.i_i.clone(),
            self.ill_m_ill.clone(),
            self.i_m_ill.clone(),
            self.i_m_i.clone(),
            self.ill_m2_ill.clone(),
            self.i_m2_ill.clone(),
            self.i_m2_i.clone(),
            self.lambda_ppll.clone(),
            self.big_lambda.clone(),
        ]
    }
}

pub fn scalar_invariants<T: Scalar>(s: &MultiplierState<T>) -> Scalar14<T> {
    let m = &s.lambda_ij;
    let m2 = m.mul_commuting(m);
    let m3 = m2.mul_commuting(m);
    let a = &s.lambda_i;
    let b = &s.lambda_ill;
    Scalar14 {
        trace: m.trace(),
        trace_sq: m2.trace(),
        trace_cube: m3.trace(),
        ill_ill: b.dot(b),
        ill_i: b.dot(a),
        i_i: a.dot(a),
        ill_m_ill: m.quad(b, b),
        i_m_ill: m.quad(a, b),
        i_m_i: m.quad(a, a),
        ill_m2_ill: m2.quad(b, b),
        i_m2_ill: m2.quad(a, b),
        i_m2_i: m2.quad(a, a),
        lambda_ppll: s.lambda_ppll.clone(),
        big_lambda: s.lambda.clone(),
    }
}

/// Apply an orthogonal transformation to every tensorial block.
pub fn rotate_state<T: Scalar + ToPrimitive>(
    s: &MultiplierState<T>,
    r: &Mat3<T>,
) -> Result<MultiplierState<T>, Error> {
    let defect = orthogonality_defect(r);
    if !(defect <= 1e-12) {
        return Err(Error::NotOrthogonal { defect });
    }
    Ok(rotate_unchecked(s, r))
}

/// Rotation without the orthogonality check, for use inside differentiated code.
pub fn rotate_unchecked<T: Scalar>(s: &MultiplierState<T>, r: &Mat3<T>) -> MultiplierState<T> {
    MultiplierState {
        lambda: s.lambda.clone(),
        lambda_i: r.mul_vec(&s.lambda_i),
        lambda_ij: s.lambda_ij.rotated(r),
        lambda_ill: r.mul_vec(&s.lambda_ill),
        lambda_ppll: s.lambda_ppll.clone(),
    }
}

fn orthogonality_defect<T: Scalar + ToPrimitive>(r: &Mat3<T>) -> f64 {
    let rtr = r.transpose().mul(r) - Mat3::identity();
    rtr.0
        .iter()
        .flatten()
        .map(|x| x.to_f64().map(f64::abs).unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};

    #[test]
    fn zero_state_has_zero_invariants() {
        let inv = scalar_invariants(&MultiplierState::<f64>::zero());
        assert!(inv.to_array().iter().all(|x| *x == 0.0));
    }

    #[test]
    fn diagonal_unit_read_off() {
        let mut s = MultiplierState::<Rational>::zero();
        s.lambda_ij = Sym3::diag(ratio(1, 1), ratio(0, 1), ratio(0, 1));
        let inv = scalar_invariants(&s).to_array();
        let one = ratio(1, 1);
        for (k, v) in inv.iter().enumerate() {
            let expected = if k < 3 { one.clone() } else { ratio(0, 1) };
            assert_eq!(*v, expected, "invariant {k}");
        }
    }

    #[test]
    fn reflection_flips_vector_blocks() {
        let mut s = MultiplierState::<f64>::zero();
        s.lambda_i = Vec3::new(0.0, 0.0, 1.0);
        s.lambda_ppll = 0.5;
        let r = Mat3::from_fn(|i, j| match (i, j) {
            (2, 2) => -1.0,
            (i, j) if i == j => 1.0,
            _ => 0.0,
        });
        let rs = rotate_state(&s, &r).unwrap();
        assert_eq!(rs.lambda_i, Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(scalar_invariants(&rs), scalar_invariants(&s));
    }

    #[test]
    fn identity_rotation_is_noop() {
        let s = MultiplierState::from_flat(&std::array::from_fn(|i| i as f64 * 0.25 - 1.0));
        assert_eq!(rotate_state(&s, &Mat3::identity()).unwrap(), s);
    }

    #[test]
    fn non_orthogonal_rejected() {
        let r = Mat3::from_fn(|i, j| if i == j { 1.1 } else { 0.0 });
        let err = rotate_state(&MultiplierState::<f64>::zero(), &r).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal { .. }));
    }

    #[test]
    fn flat_roundtrip() {
        let x: [f64; DIM] = std::array::from_fn(|i| i as f64);
        assert_eq!(MultiplierState::from_flat(&x).to_flat(), x);
    }

    #[test]
    fn json_reports_bad_lambda_ij_length() {
        let v: Value = serde_json::from_str(
            r#"{"lambda":0,"lambda_i":[0,0,0],"lambda_ij":[1,0,0,0,0],"lambda_ill":[0,0,0],"lambda_ppll":0}"#,
        )
        .unwrap();
        let err = MultiplierState::from_json_value(&v, "state").unwrap_err();
        assert!(err.to_string().contains("lambda_ij"), "{err}");
    }

    #[test]
    fn json_serialization_matches_schema() {
        let s = MultiplierState::<f64>::zero();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["lambda_ij"].as_array().unwrap().len(), 6);
        assert_eq!(MultiplierState::from_json_value(&v, "s").unwrap(), s);
    }
}
