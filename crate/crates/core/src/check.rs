use serde::{Deserialize, Serialize};

/// Relative gap below which a check is declared an equality case.
pub const EQUALITY_REL_TOL: f64 = 1e-6;

/// Default absolute floor for pass/fail decisions.
pub const DEFAULT_CHECK_TOL: f64 = 1e-9;

/// One named inequality `lhs ≤ rhs` evaluated numerically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub margin: f64,
    /// Effective tolerance: `max(base, 10 × error_estimate)`.
    pub tol: f64,
    pub pass: bool,
    /// `|margin| ≤ 1e-6 · |rhs|`.
    pub equality: bool,
    /// Conjectural checks are reported but never fail a suite.
    pub conjectural: bool,
    pub error_estimate: f64,
}

impl CheckResult {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, error_estimate: f64, base_tol: f64) -> Self {
        let margin = rhs - lhs;
        let error_estimate = if error_estimate.is_finite() {
            error_estimate.abs()
        } else {
            f64::INFINITY
        };
        let tol = base_tol.max(10.0 * error_estimate);
        let scale = rhs.abs().max(lhs.abs());
        CheckResult {
            name: name.into(),
            lhs,
            rhs,
            margin,
            tol,
            pass: margin.is_finite() && margin >= -tol,
            equality: margin.is_finite() && margin.abs() <= EQUALITY_REL_TOL * scale,
            conjectural: false,
            error_estimate,
        }
    }

    pub fn conjectural(mut self) -> Self {
        self.conjectural = true;
        self
    }

    /// A failing non-conjectural check fails the run.
    pub fn gates(&self) -> bool {
        !self.conjectural && !self.pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_margin_within_tol() {
        let c = CheckResult::new("x", 1.0, 1.0 - 5e-10, 0.0, 1e-9);
        assert!(c.pass);
        let c = CheckResult::new("x", 1.0, 1.0 - 2e-9, 0.0, 1e-9);
        assert!(!c.pass);
        assert!(c.gates());
        assert!(!c.clone().conjectural().gates());
    }

    #[test]
    fn error_estimate_widens_tolerance() {
        let c = CheckResult::new("x", 1.0, 1.0 - 5e-8, 1e-8, 1e-9);
        assert_eq!(c.tol, 1e-7);
        assert!(c.pass);
    }

    #[test]
    fn equality_flag_is_relative() {
        assert!(CheckResult::new("x", 100.0, 100.0 + 5e-5, 0.0, 1e-9).equality);
        assert!(!CheckResult::new("x", 100.0, 100.0 + 5e-3, 0.0, 1e-9).equality);
    }
}
