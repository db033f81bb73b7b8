//! Structured results of the verification suites.

use serde::Serialize;

use crate::state::MultiplierState;

/// How a check decides pass/fail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Float residual must stay at or below the tolerance.
    Bound,
    /// Exact arithmetic; any nonzero difference fails.
    Exact,
    /// A negative control: at least one trial must produce a residual above the tolerance.
    Witness,
}

/// One identity checked over many trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub kind: CheckKind,
    pub tol: f64,
    pub cases: usize,
    /// Largest residual seen; for witnesses, the largest detected magnitude.
    pub max_residual: f64,
    pub worst_trial: Option<usize>,
    #[serde(skip)]
    pub witness: Option<MultiplierState<f64>>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResidualReport {
    pub fn new(check: &str, kind: CheckKind, tol: f64) -> Self {
        Self {
            check: check.to_string(),
            kind,
            tol,
            cases: 0,
            max_residual: 0.0,
            worst_trial: None,
            witness: None,
            pass: false,
            note: None,
        }
    }

    /// Record one case. Ties keep the earliest trial, so the outcome does not
    /// depend on evaluation order as long as cases are recorded by index.
    pub fn record(&mut self, trial: usize, residual: f64, state: &MultiplierState<f64>) {
        self.cases += 1;
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        if self.worst_trial.is_none() || residual > self.max_residual {
            self.max_residual = residual;
            self.worst_trial = Some(trial);
            self.witness = Some(state.clone());
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn finish(mut self) -> Self {
        self.pass = match self.kind {
            CheckKind::Bound => self.cases > 0 && self.max_residual <= self.tol,
            CheckKind::Exact => self.cases > 0 && self.max_residual == 0.0,
            CheckKind::Witness => self.max_residual > self.tol,
        };
        self
    }
}

/// Result of one named suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    /// Largest residual over the bound and exact checks.
    pub max_residual: f64,
    pub worst_state: Option<MultiplierState<f64>>,
    pub pass: bool,
    pub checks: Vec<ResidualReport>,
}

impl SuiteReport {
    pub fn from_checks(suite: &str, trials: usize, seed: u64, checks: Vec<ResidualReport>) -> Self {
        let mut max_residual = 0.0;
        let mut worst_state = None;
        for c in checks.iter().filter(|c| c.kind != CheckKind::Witness) {
            if worst_state.is_none() || c.max_residual > max_residual {
                max_residual = c.max_residual;
                worst_state = c.witness.clone();
            }
        }
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Self { suite: suite.to_string(), trials, seed, max_residual, worst_state, pass, checks }
    }
}

/// Output of a full verification run; suites sorted by name.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub scheme: String,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_keep_first_trial() {
        let s = MultiplierState::zero();
        let mut r = ResidualReport::new("x", CheckKind::Bound, 1e-9);
        r.record(0, 0.0, &s);
        r.record(1, 0.0, &s);
        let r = r.finish();
        assert_eq!(r.worst_trial, Some(0));
        assert!(r.pass);
    }

    #[test]
    fn nan_fails() {
        let mut r = ResidualReport::new("x", CheckKind::Bound, 1e-9);
        r.record(0, f64::NAN, &MultiplierState::zero());
        assert!(!r.finish().pass);
    }

    #[test]
    fn witness_needs_a_detection() {
        let mut r = ResidualReport::new("x", CheckKind::Witness, 1e-9);
        r.record(0, 0.0, &MultiplierState::zero());
        assert!(!r.clone().finish().pass);
        r.record(1, 0.5, &MultiplierState::zero());
        assert!(r.finish().pass);
    }
}
