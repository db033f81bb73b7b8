//! Agreement of the classical limits across the three decompositions.

use serde_json::{json, Value};

use super::embedding::{embed, Scheme};
use super::limits::{limit_v, limit_v_of, limit_x, limit_x_of, LimitCoefficients, LimitV, LimitX};
use crate::scalar::Rational;
use crate::state::MultiplierState;

#[derive(Clone, Debug)]
pub struct SchemeLimits {
    pub scheme: Scheme,
    pub x: LimitX,
    pub v: LimitV,
}

impl SchemeLimits {
    fn values_equal(&self, other: &Self) -> bool {
        self.x.leading == other.x.leading
            && self.v.timelike == other.v.timelike
            && self.v.spatial == other.v.spatial
    }

    fn clean(&self) -> bool {
        self.x.clean && self.v.clean
    }

    pub fn to_json(&self) -> Value {
        json!({"scheme": self.scheme.name(), "X": self.x.to_json(), "V": self.v.to_json()})
    }
}

/// Literature scheme evaluated on its displayed, trace-free tensor without `ξ`.
#[derive(Clone, Debug)]
pub struct XiFreeDiagnostic {
    pub clean: bool,
    pub matches_paper: bool,
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub schemes: Vec<SchemeLimits>,
    pub xi_free: XiFreeDiagnostic,
    pub pass: bool,
}

impl EquivalenceReport {
    /// Full per-scheme values; attached to failing reports.
    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "schemes": self.schemes.iter().map(SchemeLimits::to_json).collect::<Vec<_>>(),
            "xi_free_literature": {"clean": self.xi_free.clean, "matches_paper": self.xi_free.matches_paper},
        })
    }
}

pub fn scheme_limits(state: &MultiplierState<Rational>, scheme: Scheme, co: &LimitCoefficients) -> SchemeLimits {
    let e = embed(state, scheme);
    SchemeLimits { scheme, x: limit_x(&e, co), v: limit_v(&e, co) }
}

/// Limits from every scheme must be clean and identical. Intermediate
/// polynomials are allowed to differ.
pub fn scheme_equivalence(state: &MultiplierState<Rational>, co: &LimitCoefficients) -> EquivalenceReport {
    let schemes: Vec<SchemeLimits> = Scheme::ALL.iter().map(|&k| scheme_limits(state, k, co)).collect();
    let pass = schemes.iter().all(SchemeLimits::clean) && schemes.windows(2).all(|w| w[0].values_equal(&w[1]));

    let lit = embed(state, Scheme::Literature);
    let t = lit.displayed_tensor();
    let bare = SchemeLimits {
        scheme: Scheme::Literature,
        x: limit_x_of(&t, &lit.vector, co),
        v: limit_v_of(&t, &lit.vector, co),
    };
    let xi_free = XiFreeDiagnostic { clean: bare.clean(), matches_paper: bare.values_equal(&schemes[0]) };
    EquivalenceReport { schemes, xi_free, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn zero_state_is_equivalent() {
        let r = scheme_equivalence(&MultiplierState::zero(), &LimitCoefficients::default());
        assert!(r.pass);
    }

    #[test]
    fn random_state_is_equivalent() {
        let s = MultiplierState::from_flat(&std::array::from_fn(|i| ratio(i as i64 * 4 % 9 - 4, i as i64 % 4 + 3)));
        let r = scheme_equivalence(&s, &LimitCoefficients::default());
        assert!(r.pass, "{}", r.to_json());
    }

    #[test]
    fn dropping_xi_is_not_equivalent() {
        let s = MultiplierState::from_flat(&std::array::from_fn(|i| ratio(i as i64 * 4 % 9 - 4, i as i64 % 4 + 3)));
        let r = scheme_equivalence(&s, &LimitCoefficients::default());
        assert!(!(r.xi_free.clean && r.xi_free.matches_paper));
    }
}
