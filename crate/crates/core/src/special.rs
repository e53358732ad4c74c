//! Gamma-function helpers on the positive real axis.

use crate::error::{Error, Result};

/// Largest argument accepted by [`gamma_real`]; `Γ(171.7)` overflows `f64`.
pub const GAMMA_MAX_ARG: f64 = 170.0;

/// `Γ(x)` for `0 < x ≤ 170`.
pub fn gamma_real(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= GAMMA_MAX_ARG) {
        return Err(Error::Domain(format!(
            "gamma_real requires 0 < x <= {GAMMA_MAX_ARG}, got {x}"
        )));
    }
    // Integer arguments are exact factorials.
    if x.fract() == 0.0 && x <= 30.0 {
        return Ok((1..x as u64).fold(1.0, |acc, k| acc * k as f64));
    }
    // The Lanczos product overflows before Γ itself does near the cap.
    if x > 100.0 {
        return Ok(statrs::function::gamma::ln_gamma(x).exp());
    }
    Ok(statrs::function::gamma::gamma(x))
}

/// `ln Γ(x)` for `x > 0`, no upper limit.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(statrs::function::gamma::ln_gamma(x))
}

/// `ln Γ(a, x)`, the logarithm of the upper incomplete gamma function, for
/// `a > 0`, `x ≥ 0`. Returns `-∞` when the regularized value underflows.
pub fn ln_upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    let lg = ln_gamma(a)?;
    if x <= 0.0 {
        return Ok(lg);
    }
    let q = statrs::function::gamma::gamma_ur(a, x);
    if q <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(lg + q.ln())
}

/// `π p / sin(π p)`, continuous at `p = 0` where it equals 1.
pub fn pi_p_over_sin(p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else {
        std::f64::consts::PI * p / (std::f64::consts::PI * p).sin()
    }
}
