use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid exponent p = {0}: p must exceed -1")]
    InvalidExponent(f64),

    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    #[error("map inversion failed for z = {re} + {im}i: {reason}")]
    Inversion { re: f64, im: f64, reason: String },

    #[error("coincident points: the Green function has a pole at {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid conformal factor: {0}")]
    InvalidFactor(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// κ-based checks need a strictly positive curvature defect.
    #[error("κ(Ω) > 0 required (computed κ = {0})")]
    Inadmissible(f64),

    #[error("check {check} not applicable: {reason}")]
    NotApplicable { check: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
