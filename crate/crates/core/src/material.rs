//! Material models: the four scalar functions `H₀…H₃` of `X₁…X₈`.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::closure::XSet;
use crate::error::{Error, Result, SchemaError};
use crate::scalar::{format_rational, parse_rational, rational_from_f64, ratio, Rational, Scalar};

/// A set of material functions `H₀…H₃`.
///
/// `eval` must be a pure function of its argument and work for every scalar
/// backend, so that moments and fluxes can be obtained by differentiating
/// through it.
pub trait Material: Send + Sync {
    fn eval<T: Scalar>(&self, x: &XSet<T>) -> Result<[T; 4]>;

    /// `∂Hⱼ/∂Xᵢ` as a 4×8 matrix. Falls back to central differences.
    fn gradient(&self, x: &XSet<f64>) -> Result<[[f64; 8]; 4]> {
        finite_difference_gradient(self, x)
    }

    /// Whether [`Material::gradient`] is analytic rather than the fallback.
    fn analytic_gradient(&self) -> bool {
        false
    }
}

/// Central-difference gradient with step `1e-6·(1+|Xᵢ|)`.
pub fn finite_difference_gradient<M: Material + ?Sized>(
    mat: &M,
    x: &XSet<f64>,
) -> Result<[[f64; 8]; 4]> {
    let mut out = [[0.0; 8]; 4];
    for i in 0..8 {
        let h = 1e-6 * (1.0 + x.0[i].abs());
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus.0[i] += h;
        minus.0[i] -= h;
        let hp = mat.eval(&plus)?;
        let hm = mat.eval(&minus)?;
        for j in 0..4 {
            out[j][i] = (hp[j] - hm[j]) / (2.0 * h);
        }
    }
    Ok(out)
}

/// One monomial `coeff · Π Xᵢ^powersᵢ` contributing to `H_target`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub target: usize,
    pub coeff: Rational,
    pub powers: [u32; 8],
}

/// Polynomial material with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolynomialMaterial {
    pub terms: Vec<Term>,
}

impl PolynomialMaterial {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    /// `Hⱼ = 1`, all others zero.
    pub fn constant(j: usize) -> Self {
        let mut h = [ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)];
        h[j] = ratio(1, 1);
        Self::constants(h)
    }

    pub fn constants(h: [Rational; 4]) -> Self {
        Self::new(
            h.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(target, coeff)| Term { target, coeff, powers: [0; 8] })
                .collect(),
        )
    }

    /// `Hⱼ = Σᵢ Cⱼᵢ Xᵢ`, so that the gradient is exactly `C`.
    pub fn linear(c: &[[Rational; 8]; 4]) -> Self {
        let mut terms = Vec::new();
        for (target, row) in c.iter().enumerate() {
            for (i, coeff) in row.iter().enumerate() {
                if !coeff.is_zero() {
                    let mut powers = [0; 8];
                    powers[i] = 1;
                    terms.push(Term { target, coeff: coeff.clone(), powers });
                }
            }
        }
        Self::new(terms)
    }

    /// Fixture matrix for [`PolynomialMaterial::linear`].
    pub fn linear_fixture_matrix() -> [[Rational; 8]; 4] {
        std::array::from_fn(|j| {
            std::array::from_fn(|i| ratio(((3 * j + 5 * i + 1) % 7) as i64 - 3, 5))
        })
    }

    /// Second-degree fixture: constants, linear and mixed quadratic terms in
    /// every target, touching all eight scalars.
    pub fn quadratic_fixture() -> Self {
        let mono = |target: usize, num: i64, den: i64, idx: &[usize]| {
            let mut powers = [0; 8];
            for &i in idx {
                powers[i] += 1;
            }
            Term { target, coeff: ratio(num, den), powers }
        };
        Self::new(vec![
            mono(0, 1, 1, &[]),
            mono(0, 1, 2, &[4]),
            mono(0, -1, 3, &[0, 1]),
            mono(0, 1, 4, &[5, 5]),
            mono(1, 2, 3, &[]),
            mono(1, -1, 5, &[2]),
            mono(1, 1, 7, &[4, 6]),
            mono(2, -1, 2, &[]),
            mono(2, 3, 10, &[3, 7]),
            mono(2, 1, 6, &[0, 0]),
            mono(3, 1, 3, &[]),
            mono(3, -2, 9, &[1, 4]),
            mono(3, 1, 8, &[7]),
        ])
    }

    /// `H₀ = 1`, `H₁ = X₅`: couples the flux to `λ` and `λ_i`.
    pub fn x5_coupled() -> Self {
        let mut powers = [0; 8];
        powers[4] = 1;
        Self::new(vec![
            Term { target: 0, coeff: ratio(1, 1), powers: [0; 8] },
            Term { target: 1, coeff: ratio(1, 1), powers },
        ])
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.powers.iter().sum()).max().unwrap_or(0)
    }

    pub fn from_json_value(value: &Value, path: &str) -> Result<Self, SchemaError> {
        let obj = value
            .as_object()
            .ok_or_else(|| SchemaError::new(path, "expected a JSON object"))?;
        match obj.get("kind").and_then(Value::as_str) {
            Some("polynomial") => {}
            Some("builtin") => {
                let name = obj
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| SchemaError::new(&format!("{path}.name"), "expected a string"))?;
                return builtin_material(name)
                    .map_err(|e| SchemaError::new(&format!("{path}.name"), &e.to_string()));
            }
            Some(other) => {
                return Err(SchemaError::new(
                    &format!("{path}.kind"),
                    &format!("unsupported kind `{other}` (expected \"polynomial\")"),
                ))
            }
            None => return Err(SchemaError::new(&format!("{path}.kind"), "missing string field")),
        }
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| SchemaError::new(&format!("{path}.terms"), "expected an array"))?;
        let mut out = Vec::with_capacity(terms.len());
        for (n, t) in terms.iter().enumerate() {
            let tp = format!("{path}.terms[{n}]");
            let target = match t.get("target").and_then(Value::as_str) {
                Some("H0") => 0,
                Some("H1") => 1,
                Some("H2") => 2,
                Some("H3") => 3,
                _ => return Err(SchemaError::new(&format!("{tp}.target"), "expected one of H0, H1, H2, H3")),
            };
            let coeff = match t.get("coeff") {
                Some(Value::Number(x)) => x
                    .as_f64()
                    .filter(|x| x.is_finite())
                    .and_then(rational_from_f64),
                Some(Value::String(s)) => parse_rational(s),
                _ => None,
            }
            .ok_or_else(|| SchemaError::new(&format!("{tp}.coeff"), "expected a finite number or \"p/q\""))?;
            let powers_v = t
                .get("powers")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 8)
                .ok_or_else(|| SchemaError::new(&format!("{tp}.powers"), "expected 8 non-negative integers"))?;
            let mut powers = [0u32; 8];
            for (i, p) in powers_v.iter().enumerate() {
                powers[i] = p
                    .as_u64()
                    .and_then(|p| u32::try_from(p).ok())
                    .ok_or_else(|| SchemaError::new(&format!("{tp}.powers[{i}]"), "expected a non-negative integer"))?;
            }
            out.push(Term { target, coeff, powers });
        }
        Ok(Self::new(out))
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                let mut m = Map::new();
                m.insert("target".into(), json!(format!("H{}", t.target)));
                m.insert("coeff".into(), coeff_to_json(&t.coeff));
                m.insert("powers".into(), json!(t.powers));
                Value::Object(m)
            })
            .collect();
        json!({"kind": "polynomial", "terms": terms})
    }
}

/// Numbers when exactly representable as `f64`, `"p/q"` strings otherwise.
fn coeff_to_json(q: &Rational) -> Value {
    match q.to_f64().and_then(|x| rational_from_f64(x).filter(|r| r == q).map(|_| x)) {
        Some(x) => json!(x),
        None => json!(format_rational(q)),
    }
}

impl Material for PolynomialMaterial {
    fn eval<T: Scalar>(&self, x: &XSet<T>) -> Result<[T; 4]> {
        let mut h: [T; 4] = std::array::from_fn(|_| T::zero());
        for t in &self.terms {
            if t.target > 3 {
                return Err(Error::Material(format!("term target H{} out of range", t.target)));
            }
            let mut m = T::from_rational(&t.coeff);
            for (i, &p) in t.powers.iter().enumerate() {
                if p > 0 {
                    m *= x.0[i].powi(p);
                }
            }
            h[t.target] += m;
        }
        Ok(h)
    }

    fn gradient(&self, x: &XSet<f64>) -> Result<[[f64; 8]; 4]> {
        let mut out = [[0.0; 8]; 4];
        for t in &self.terms {
            let coeff = f64::from_rational(&t.coeff);
            for i in 0..8 {
                if t.powers[i] == 0 {
                    continue;
                }
                let mut d = coeff * t.powers[i] as f64;
                for (k, &p) in t.powers.iter().enumerate() {
                    let p = if k == i { p - 1 } else { p };
                    d *= x.0[k].powi(p as i32);
                }
                out[t.target][i] += d;
            }
        }
        Ok(out)
    }

    fn analytic_gradient(&self) -> bool {
        true
    }
}

/// Names accepted by [`builtin_material`].
pub const BUILTIN_NAMES: [&str; 7] = [
    "constant(0)",
    "constant(1)",
    "constant(2)",
    "constant(3)",
    "linear",
    "quadratic",
    "x5-coupled",
];

pub fn builtin_material(name: &str) -> Result<PolynomialMaterial> {
    let name = name.trim();
    if let Some(j) = name
        .strip_prefix("constant(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(|d| d.trim().parse::<usize>().ok())
    {
        if j < 4 {
            return Ok(PolynomialMaterial::constant(j));
        }
    }
    match name {
        "linear" => Ok(PolynomialMaterial::linear(&PolynomialMaterial::linear_fixture_matrix())),
        "quadratic" => Ok(PolynomialMaterial::quadratic_fixture()),
        "x5-coupled" => Ok(PolynomialMaterial::x5_coupled()),
        _ => Err(Error::UnknownMaterial(name.to_string())),
    }
}

/// The five materials used by the Galilean suite.
pub fn galilean_suite_materials() -> Vec<(&'static str, PolynomialMaterial)> {
    ["constant(0)", "constant(3)", "linear", "quadratic", "x5-coupled"]
        .into_iter()
        .map(|n| (n, builtin_material(n).expect("fixture names are valid")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs() -> XSet<f64> {
        XSet([0.3, -0.7, 1.1, 0.2, -0.4, 0.9, -1.3, 0.6])
    }

    #[test]
    fn constant_fixture() {
        let m = builtin_material("constant(0)").unwrap();
        assert_eq!(m.eval(&xs()).unwrap(), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(m.gradient(&xs()).unwrap(), [[0.0; 8]; 4]);
    }

    #[test]
    fn linear_gradient_is_the_matrix() {
        let c = PolynomialMaterial::linear_fixture_matrix();
        let m = PolynomialMaterial::linear(&c);
        let g = m.gradient(&xs()).unwrap();
        for j in 0..4 {
            for i in 0..8 {
                assert_eq!(g[j][i], f64::from_rational(&c[j][i]));
            }
        }
    }

    #[test]
    fn quadratic_gradient_matches_finite_differences() {
        let m = PolynomialMaterial::quadratic_fixture();
        let g = m.gradient(&xs()).unwrap();
        let fd = finite_difference_gradient(&m, &xs()).unwrap();
        for j in 0..4 {
            for i in 0..8 {
                assert!((g[j][i] - fd[j][i]).abs() <= 1e-7 * (1.0 + g[j][i].abs()), "{j},{i}");
            }
        }
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(builtin_material("cubic"), Err(Error::UnknownMaterial(_))));
        assert!(builtin_material("constant(4)").is_err());
    }

    #[test]
    fn json_roundtrip_keeps_exact_coefficients() {
        let m = PolynomialMaterial::quadratic_fixture();
        let back = PolynomialMaterial::from_json_value(&m.to_json_value(), "material").unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn json_errors_are_path_qualified() {
        let v: Value = serde_json::from_str(
            r#"{"kind":"polynomial","terms":[{"target":"H0","coeff":1,"powers":[0,0,0]}]}"#,
        )
        .unwrap();
        let err = PolynomialMaterial::from_json_value(&v, "material").unwrap_err();
        assert_eq!(err.path, "material.terms[0].powers");
    }
}
