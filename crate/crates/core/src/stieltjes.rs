//! One-dimensional engine for Riemann–Stieltjes power moments of monotone
//! profiles.
//!
//! A [`MonotoneProfile`] is a nonincreasing function `X(t) ≥ 0` on `[0, ∞)`
//! together with a decay budget `c > 0` such that `e^{ct} X(t)` is also
//! nonincreasing. For such profiles the normalized moments
//!
//! ```text
//! N(p) = c^p Y_p(0) / Γ(p + 1),    Y_p(0) = -∫₀^∞ t^p dX(t)
//! ```
//!
//! are nonincreasing in `p ≥ 0`, constant exactly for `X(t) = X(0) e^{-ct}`,
//! and tend to `lim e^{ct} X(t)` as `p → ∞`.
//!
//! Profiles are closed-form evaluables sampled on a validation grid; the
//! analytic envelope `X(t) ≤ X(T) e^{-c(t-T)}` bounds everything beyond the
//! last grid point `T`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadResult, Tolerance};
use crate::special::{ln_gamma, ln_upper_incomplete_gamma, pi_p_over_sin, GAMMA_MAX_ARG};

/// Shared scalar function `t ↦ value`.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Minimum number of validation samples.
pub const MIN_GRID_POINTS: usize = 64;

/// Slack, relative to `X(0)`, allowed in the discrete monotonicity tests.
pub const VALIDATION_SLACK: f64 = 1e-12;

#[derive(Clone)]
pub struct MonotoneProfile {
    eval: ScalarFn,
    density: Option<ScalarFn>,
    c: f64,
    t_grid: Vec<f64>,
}

impl std::fmt::Debug for MonotoneProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MonotoneProfile")
            .field("c", &self.c)
            .field("grid_points", &self.t_grid.len())
            .field("tail_cutoff", &self.tail_cutoff())
            .field("analytic_density", &self.density.is_some())
            .finish()
    }
}

impl MonotoneProfile {
    /// Builds a profile from `X`, the decay budget `c` and a strictly
    /// increasing grid of at least [`MIN_GRID_POINTS`] abscissae in `[0, ∞)`.
    pub fn new<F>(eval: F, c: f64, t_grid: Vec<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("decay budget c must be positive, got {c}")));
        }
        if t_grid.len() < MIN_GRID_POINTS {
            return Err(Error::Domain(format!(
                "profile grid needs at least {MIN_GRID_POINTS} points, got {}",
                t_grid.len()
            )));
        }
        if t_grid.iter().any(|t| !t.is_finite()) || t_grid[0] < 0.0 {
            return Err(Error::Domain("profile grid must be finite and start at t >= 0".into()));
        }
        if t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("profile grid must be strictly increasing".into()));
        }
        Ok(MonotoneProfile {
            eval: Arc::new(eval),
            density: None,
            c,
            t_grid,
        })
    }

    /// Attaches the analytic density `X₀ = -dX/dt`.
    pub fn with_density<F>(mut self, density: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.density = Some(Arc::new(density));
        self
    }

    /// `X(t) = x0 · e^{-rate·t}` with budget `c`, sampled on `n` uniform
    /// points of `[0, t_max]`.
    pub fn exponential(x0: f64, rate: f64, c: f64, t_max: f64, n: usize) -> Result<Self> {
        Ok(Self::new(move |t| x0 * (-rate * t).exp(), c, uniform_grid(t_max, n))?
            .with_density(move |t| rate * x0 * (-rate * t).exp()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// `X₀(t) = -dX/dt`: the analytic density when attached, otherwise a
    /// centered difference (one-sided at the origin).
    pub fn density(&self, t: f64) -> f64 {
        if let Some(d) = &self.density {
            return d(t);
        }
        let h = 1e-5 * (1.0 + t);
        if t < h {
            // second-order one-sided difference
            let (x0, x1, x2) = (self.eval(t), self.eval(t + h), self.eval(t + 2.0 * h));
            -(-3.0 * x0 + 4.0 * x1 - x2) / (2.0 * h)
        } else {
            (self.eval(t - h) - self.eval(t + h)) / (2.0 * h)
        }
    }

    pub fn has_analytic_density(&self) -> bool {
        self.density.is_some()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    /// Last grid abscissa `T`; the envelope governs `t > T`.
    pub fn tail_cutoff(&self) -> f64 {
        *self.t_grid.last().expect("grid is nonempty")
    }

    /// `e^{ct} X(t)` without overflowing for large `ct`.
    fn weighted(&self, t: f64, x: f64) -> f64 {
        if x > 0.0 {
            (self.c * t + x.ln()).exp()
        } else {
            x
        }
    }
}

/// `n` uniformly spaced points on `[0, t_max]`.
pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `X(t) < 0` at a sample.
    Negative,
    /// `X` increases across an interval.
    Increasing,
    /// `e^{ct} X(t)` increases across an interval.
    WeightedIncreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub t_start: f64,
    pub t_end: f64,
    /// Size of the offending increase (or the negative value).
    pub amount: f64,
}

/// Lists every grid location where the profile hypotheses fail, using slack
/// `1e-12 · X(0)`. An empty list means the profile is valid.
pub fn profile_validate(profile: &MonotoneProfile) -> Vec<Violation> {
    let grid = profile.t_grid();
    let values: Vec<f64> = grid.iter().map(|&t| profile.eval(t)).collect();
    let slack = VALIDATION_SLACK * profile.eval(0.0).abs();
    let mut out = Vec::new();
    for (&t, &x) in grid.iter().zip(&values) {
        if !(x >= -slack) {
            out.push(Violation {
                kind: ViolationKind::Negative,
                t_start: t,
                t_end: t,
                amount: x,
            });
        }
    }
    for i in 0..grid.len() - 1 {
        let (t0, t1) = (grid[i], grid[i + 1]);
        let (x0, x1) = (values[i], values[i + 1]);
        if x1 - x0 > slack {
            out.push(Violation {
                kind: ViolationKind::Increasing,
                t_start: t0,
                t_end: t1,
                amount: x1 - x0,
            });
        }
        let (w0, w1) = (profile.weighted(t0, x0), profile.weighted(t1, x1));
        if w1 - w0 > slack {
            out.push(Violation {
                kind: ViolationKind::WeightedIncreasing,
                t_start: t0,
                t_end: t1,
                amount: w1 - w0,
            });
        }
    }
    out
}

/// The moment `Y_p(0)`, carried in log form so that large `p` never
/// overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerMoment {
    pub p: f64,
    pub value: f64,
    pub ln_value: f64,
    pub converged: bool,
    /// Bound on the part of the moment beyond the grid cutoff.
    pub tail_bound: f64,
    pub quad_error: f64,
}

impl PowerMoment {
    pub fn error_estimate(&self) -> f64 {
        self.tail_bound + self.quad_error
    }

    /// Relative error estimate, safe for overflowing values.
    pub fn relative_error(&self) -> f64 {
        if self.value > 0.0 && self.value.is_finite() {
            self.error_estimate() / self.value
        } else {
            0.0
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > -1.0) || !p.is_finite() {
        return Err(Error::InvalidExponent(p));
    }
    if p + 1.0 > GAMMA_MAX_ARG + 1.0 {
        return Err(Error::Domain(format!(
            "p = {p} exceeds the supported cap {GAMMA_MAX_ARG}"
        )));
    }
    Ok(())
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn safe_ln(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

struct Pieces {
    scaled: f64,
    scaled_error: f64,
    converged: bool,
}

fn add_piece(acc: &mut Pieces, q: QuadResult) {
    acc.scaled += q.value;
    acc.scaled_error += q.error;
    acc.converged &= q.converged;
}

/// Computes `Y_p(0)` by the route best suited to `p` and flags convergence
/// instead of failing.
///
/// * `p = 0`: `X(0)`.
/// * `p > 0`: `p ∫₀^T t^{p-1} X(t) dt` plus the envelope tail.
/// * `-1 < p < 0`: `∫₀^T t^p X₀(t) dt` plus the envelope tail.
///
/// `tol` is relative. The envelope tail is added to the value, so the value
/// is exact for exponential profiles and otherwise overestimates by at most
/// `tail_bound`.
pub fn moment_estimate(profile: &MonotoneProfile, p: f64, tol: f64) -> Result<PowerMoment> {
    check_exponent(p)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if p == 0.0 {
        let x0 = profile.eval(0.0);
        return Ok(PowerMoment {
            p,
            value: x0,
            ln_value: safe_ln(x0),
            converged: x0.is_finite(),
            tail_bound: 0.0,
            quad_error: 0.0,
        });
    }
    if p > 0.0 {
        moment_by_parts(profile, p, tol)
    } else {
        moment_by_density(profile, p, tol)
    }
}

/// [`moment_estimate`] that turns non-convergence into an error.
pub fn moment(profile: &MonotoneProfile, p: f64, tol: f64) -> Result<PowerMoment> {
    let m = moment_estimate(profile, p, tol)?;
    if !m.converged {
        return Err(Error::NonConvergence(format!(
            "moment p = {p}: quadrature error {:e}, tail bound {:e}, value {:e}",
            m.quad_error, m.tail_bound, m.value
        )));
    }
    Ok(m)
}

/// `Y_p(0) = p ∫₀^∞ t^{p-1} X(t) dt` for `p > 0`.
fn moment_by_parts(profile: &MonotoneProfile, p: f64, tol: f64) -> Result<PowerMoment> {
    let c = profile.c();
    let big_t = profile.tail_cutoff();
    let shift = profile
        .t_grid()
        .iter()
        .map(|&t| (p - 1.0) * t.max(1.0).ln() + safe_ln(profile.eval(t)))
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if shift.is_finite() { shift } else { 0.0 };
    let rel = Tolerance::relative(tol * 0.25);
    let ln_p = p.ln();

    let integrand = |t: f64| {
        if t <= 0.0 {
            return if p == 1.0 {
                (profile.eval(0.0).ln() - shift).exp()
            } else {
                0.0
            };
        }
        let x = profile.eval(t);
        if x <= 0.0 {
            return 0.0;
        }
        (ln_p + (p - 1.0) * t.ln() + x.ln() - shift).exp()
    };

    let mut acc = Pieces {
        scaled: 0.0,
        scaled_error: 0.0,
        converged: true,
    };
    let split = big_t.min(1.0);
    if p < 1.0 {
        // s = t^p removes the t^{p-1} singularity: p t^{p-1} dt = ds.
        let inv = 1.0 / p;
        let upper = split.powf(p);
        let q = integrate(
            |s: f64| {
                let x = profile.eval(s.powf(inv));
                if x > 0.0 {
                    (x.ln() - shift).exp()
                } else {
                    0.0
                }
            },
            0.0,
            upper,
            rel,
        );
        add_piece(&mut acc, q);
        let q = integrate(integrand, split, big_t, rel);
        add_piece(&mut acc, q);
    } else {
        let q = integrate(integrand, 0.0, big_t, rel);
        add_piece(&mut acc, q);
    }

    // Envelope: p ∫_T^∞ t^{p-1} X(T) e^{-c(t-T)} dt = p X(T) e^{cT} c^{-p} Γ(p, cT)
    let x_t = profile.eval(big_t);
    let ln_tail = if x_t > 0.0 {
        ln_p + x_t.ln() + c * big_t - p * c.ln() + ln_upper_incomplete_gamma(p, c * big_t)?
    } else {
        f64::NEG_INFINITY
    };
    finish(p, shift, acc, ln_tail, ln_tail, tol)
}

/// `Y_p(0) = ∫₀^∞ t^p X₀(t) dt`, valid for every `p > -1`.
pub fn moment_by_density(profile: &MonotoneProfile, p: f64, tol: f64) -> Result<PowerMoment> {
    check_exponent(p)?;
    let c = profile.c();
    let big_t = profile.tail_cutoff();
    let shift = profile
        .t_grid()
        .iter()
        .map(|&t| p * t.max(1.0).ln() + safe_ln(profile.density(t)))
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if shift.is_finite() { shift } else { 0.0 };
    let rel = Tolerance::relative(tol * 0.25);

    let integrand = |t: f64| {
        let d = profile.density(t);
        if d <= 0.0 {
            return 0.0;
        }
        if t <= 0.0 {
            return if p == 0.0 { (d.ln() - shift).exp() } else { 0.0 };
        }
        (p * t.ln() + d.ln() - shift).exp()
    };

    let mut acc = Pieces {
        scaled: 0.0,
        scaled_error: 0.0,
        converged: true,
    };
    let split = big_t.min(1.0);
    if p < 0.0 {
        // s = t^{1+p}: t^p dt = ds / (1+p).
        let a = 1.0 + p;
        let inv = 1.0 / a;
        let q = integrate(
            |s: f64| {
                let d = profile.density(s.powf(inv));
                if d > 0.0 {
                    (d.ln() - shift).exp() * inv
                } else {
                    0.0
                }
            },
            0.0,
            split.powf(a),
            rel,
        );
        add_piece(&mut acc, q);
        let q = integrate(integrand, split, big_t, rel);
        add_piece(&mut acc, q);
    } else {
        let q = integrate(integrand, 0.0, big_t, rel);
        add_piece(&mut acc, q);
    }

    // -∫_T^∞ t^p dX with X(T) e^{-c(t-T)}: X(T) e^{cT} c^{-p} Γ(p+1, cT).
    let x_t = profile.eval(big_t);
    let (ln_tail, ln_bound) = if x_t > 0.0 {
        let est = x_t.ln() + c * big_t - p * c.ln() + ln_upper_incomplete_gamma(p + 1.0, c * big_t)?;
        // For p < 0 the true tail lies in [0, T^p X(T)].
        let bound = if p < 0.0 { p * big_t.ln() + x_t.ln() } else { est };
        (est, bound.max(est))
    } else {
        (f64::NEG_INFINITY, f64::NEG_INFINITY)
    };
    finish(p, shift, acc, ln_tail, ln_bound, tol)
}

fn finish(p: f64, shift: f64, acc: Pieces, ln_tail: f64, ln_bound: f64, tol: f64) -> Result<PowerMoment> {
    if !acc.scaled.is_finite() {
        return Err(Error::NonConvergence(format!("moment p = {p}: non-finite integrand")));
    }
    let ln_body = safe_ln(acc.scaled) + shift;
    let ln_value = log_add(ln_body, ln_tail);
    let value = ln_value.exp();
    let quad_error = if acc.scaled > 0.0 {
        (acc.scaled_error.ln() + shift).exp()
    } else {
        acc.scaled_error
    };
    let tail_bound = ln_bound.exp();
    let rel = |e: f64| {
        if ln_value.is_finite() {
            (safe_ln(e) - ln_value).exp()
        } else {
            0.0
        }
    };
    let converged = acc.converged && rel(tail_bound) <= tol && rel(quad_error) <= tol;
    Ok(PowerMoment {
        p,
        value,
        ln_value,
        converged,
        tail_bound,
        quad_error,
    })
}

/// `(N(p), absolute error estimate)` from a computed moment and budget `c`.
pub fn normalize(m: &PowerMoment, c: f64) -> Result<(f64, f64)> {
    let ln_n = m.ln_value + m.p * c.ln() - ln_gamma(m.p + 1.0)?;
    let value = ln_n.exp();
    let rel = if m.ln_value.is_finite() {
        (safe_ln(m.error_estimate()) - m.ln_value).exp()
    } else {
        0.0
    };
    Ok((value, value * rel))
}

/// `N(p) = c^p Y_p(0) / Γ(p+1)`, evaluated in log space.
pub fn normalized_moment(profile: &MonotoneProfile, p: f64, tol: f64) -> Result<f64> {
    let m = moment(profile, p, tol)?;
    Ok(normalize(&m, profile.c())?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub p: f64,
    pub normalized: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPair {
    pub p_lo: f64,
    pub p_hi: f64,
    /// `N(p_hi) - N(p_lo)`; nonpositive when monotone.
    pub increment: f64,
    pub pass: bool,
    /// Pairs starting below zero are outside the proven range.
    pub conjectural: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneScan {
    pub points: Vec<ScanPoint>,
    pub pairs: Vec<ScanPair>,
    pub pass: bool,
}

/// Evaluates `N(p)` on an increasing grid and tests `N(p_{k+1}) ≤ N(p_k) + tol`
/// for each consecutive pair. Pairs with `p_k < 0` are reported but never
/// fail the scan. Grid points are evaluated in parallel; the result does not
/// depend on scheduling.
pub fn monotone_scan(profile: &MonotoneProfile, p_grid: &[f64], tol: f64) -> Result<MonotoneScan> {
    if p_grid.len() < 2 {
        return Err(Error::Domain("monotone scan needs at least two exponents".into()));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("exponent grid must be strictly increasing".into()));
    }
    let quad_tol = (tol * 1e-2).clamp(1e-13, 1e-8);
    let points = p_grid
        .par_iter()
        .map(|&p| {
            let m = moment(profile, p, quad_tol)?;
            let (normalized, error_estimate) = normalize(&m, profile.c())?;
            Ok(ScanPoint {
                p,
                normalized,
                error_estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<ScanPair> = points
        .windows(2)
        .map(|w| {
            let increment = w[1].normalized - w[0].normalized;
            ScanPair {
                p_lo: w[0].p,
                p_hi: w[1].p,
                increment,
                pass: increment <= tol,
                conjectural: w[0].p < 0.0,
            }
        })
        .collect();
    let pass = pairs.iter().all(|pr| pr.pass || pr.conjectural);
    Ok(MonotoneScan { points, pairs, pass })
}

/// Whether `X(t) = X(0) e^{-ct}` on the grid to relative `tol`.
///
/// A vanishing profile (`X(0) = 0`) is treated as the trivial equality case.
pub fn equality_test(profile: &MonotoneProfile, tol: f64) -> bool {
    let x0 = profile.eval(0.0);
    if x0 == 0.0 {
        return true;
    }
    let c = profile.c();
    profile
        .t_grid()
        .iter()
        .all(|&t| ((profile.eval(t) - x0 * (-c * t).exp()) / x0).abs() <= tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailLimit {
    /// `e^{cT} X(T)`, an upper bound for `lim e^{ct} X(t)`.
    pub value: f64,
    /// Decrease over the last grid interval, used as the error estimate.
    pub decrement: f64,
    pub t: f64,
}

/// `e^{cT} X(T)` at the last grid point where `X` is still positive.
pub fn tail_limit(profile: &MonotoneProfile) -> TailLimit {
    let grid = profile.t_grid();
    let usable = grid
        .iter()
        .rposition(|&t| profile.eval(t) > 0.0)
        .unwrap_or(grid.len() - 1);
    let t = grid[usable];
    let value = profile.weighted(t, profile.eval(t));
    let decrement = if usable > 0 {
        let prev = grid[usable - 1];
        (profile.weighted(prev, profile.eval(prev)) - value).max(0.0)
    } else {
        0.0
    };
    TailLimit { value, decrement, t }
}

/// Constant `(π p / sin π p) c^p / Γ(1+p)` of the negative-exponent bound.
pub fn negative_p_constant(p: f64, c: f64) -> Result<f64> {
    Ok(pi_p_over_sin(p) * (p * c.ln() - ln_gamma(1.0 + p)?).exp())
}

/// Proven bounds for `-1 < p < 0`:
///
/// * `Y_0(0) ≤ A(p) Y_p(0)` with `A(p) = (πp / sin πp) c^p / Γ(1+p)`;
/// * for `p < p2 < 0`, the Hölder interpolation
///   `Y_{p2}(0) ≤ min{A(p)^{1-p2/p}, A(p2)^{p/p2-1}} Y_p(0)`.
pub fn negative_p_bounds(
    profile: &MonotoneProfile,
    p: f64,
    p2: Option<f64>,
    tol: f64,
) -> Result<(CheckResult, Option<CheckResult>)> {
    if !(p > -1.0 && p < 0.0) {
        return Err(Error::Domain(format!("negative-p bound needs -1 < p < 0, got {p}")));
    }
    let c = profile.c();
    let quad_tol = (tol * 1e-2).clamp(1e-13, 1e-8);
    let y0 = moment(profile, 0.0, quad_tol)?;
    let yp = moment(profile, p, quad_tol)?;
    let a1 = negative_p_constant(p, c)?;
    let first = CheckResult::new(
        format!("negative_p.area_bound[p={p}]"),
        y0.value,
        a1 * yp.value,
        a1 * yp.error_estimate(),
        tol,
    );
    let second = match p2 {
        None => None,
        Some(p2) => {
            if !(p2 > p && p2 < 0.0) {
                return Err(Error::Domain(format!(
                    "second exponent must satisfy {p} < p2 < 0, got {p2}"
                )));
            }
            let yq = moment(profile, p2, quad_tol)?;
            let a2 = negative_p_constant(p2, c)?;
            let ratio = p2 / p;
            let factor = a1.powf(1.0 - ratio).min(a2.powf(1.0 / ratio - 1.0));
            Some(CheckResult::new(
                format!("negative_p.holder[p1={p},p2={p2}]"),
                yq.value,
                factor * yp.value,
                yq.error_estimate() + factor * yp.error_estimate(),
                tol,
            ))
        }
    };
    Ok((first, second))
}
