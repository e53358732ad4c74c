//! Level sets of the Green function and the moments built on them.
//!
//! With `b = f⁻¹(a)` and `h = f ∘ φ_b`, the superlevel set
//! `Ω_t = {g_Ω(·, a) > t}` is the image of the disk `|w| < ρ(t) = e^{-2πt}`,
//! so every area integral becomes a radial integral of the angular mean
//! `M(r)` of `E(w) = e^{2u(h(w))} |h′(w)|²`:
//!
//! ```text
//! X(t)  = 2π ∫₀^ρ r M(r) dr
//! X₀(t) = -X′(t) = 4π² ρ² M(ρ)
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::conformal::{
    conformal_radius_preimage, green_normal_boundary_preimage, map_invert, mobius_deriv, mobius_unchecked, unit,
    AnalyticMap, ComplexPoint, INVERT_TOL,
};
use crate::error::{Error, Result};
use crate::metric::{curvature_summary, ConformalFactor, CurvatureSummary};
use crate::quadrature::{integrate, periodic_mean, Tolerance};
use crate::stieltjes::{self, uniform_grid, MonotoneProfile, PowerMoment};

/// Largest admissible `|f⁻¹(a)|`.
pub const MAX_POLE_PREIMAGE: f64 = 0.95;
/// Largest admissible level cutoff; beyond it `X(t)` leaves the normal range.
pub const MAX_T: f64 = 40.0;
/// Validation grid size for level profiles.
pub const PROFILE_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pole {
    /// The pole `a` itself, inverted through the map.
    Domain(ComplexPoint),
    /// The disk preimage `b = f⁻¹(a)`, used exactly.
    Preimage(ComplexPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub map: AnalyticMap,
    pub factor: ConformalFactor,
    pub pole: Pole,
    pub quad_tol: f64,
    pub t_max: f64,
    pub p_grid: Vec<f64>,
}

impl Scenario {
    pub fn new(map: AnalyticMap, factor: ConformalFactor, pole: Pole) -> Self {
        Scenario {
            map,
            factor,
            pole,
            quad_tol: 1e-10,
            t_max: 8.0,
            p_grid: vec![0.0, 0.25, 0.5, 1.0, 2.0, 5.0],
        }
    }

    pub fn with_p_grid(mut self, p_grid: Vec<f64>) -> Self {
        self.p_grid = p_grid;
        self
    }

    pub fn with_quad_tol(mut self, quad_tol: f64) -> Self {
        self.quad_tol = quad_tol;
        self
    }

    pub fn with_t_max(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }
}

/// The integrand `E(w) = e^{2u(h(w))}|h′(w)|²` on the pulled-back disk.
#[derive(Debug, Clone)]
struct Pullback {
    map: AnalyticMap,
    factor: ConformalFactor,
    b: ComplexPoint,
}

impl Pullback {
    fn energy(&self, w: ComplexPoint) -> f64 {
        let v = mobius_unchecked(self.b, w);
        let dh = self.map.deriv(v) * mobius_deriv(self.b, w);
        self.factor.density(self.map.eval(v)) * dh.norm_sqr()
    }

    /// Angular mean `M(r)` of `E` on `|w| = r`.
    fn ring_mean(&self, r: f64, rel_tol: f64) -> f64 {
        if r == 0.0 {
            return self.energy(ComplexPoint::new(0.0, 0.0));
        }
        periodic_mean(|t| self.energy(unit(t) * r), rel_tol, 16).value
    }
}

/// Cumulative `∫₀^r s M(s) ds` on dyadic panels `[2^{-k-1}, 2^{-k}]`.
struct RadialTable {
    pullback: Pullback,
    /// Panel edges, decreasing from 1.
    edges: Vec<f64>,
    /// `below[k] = ∫₀^{edges[k]} s M(s) ds`.
    below: Vec<f64>,
    error: f64,
    rel_tol: f64,
}

impl RadialTable {
    fn build(pullback: Pullback, r_min: f64, rel_tol: f64) -> Result<Self> {
        let mut edges = vec![1.0];
        while *edges.last().unwrap() > r_min {
            let next = edges.last().unwrap() * 0.5;
            edges.push(next);
        }
        let inner = (rel_tol * 1e-2).max(1e-15);
        let integrand = |s: f64| s * pullback.ring_mean(s, inner);
        let n = edges.len();
        let mut error = 0.0;
        // Innermost piece [0, edges[n-1]] first, then outward.
        let innermost = integrate(integrand, 0.0, edges[n - 1], Tolerance::relative(rel_tol));
        error += innermost.error;
        let mut ok = innermost.converged;
        let mut below = vec![0.0; n];
        below[n - 1] = innermost.value;
        for k in (0..n - 1).rev() {
            let q = integrate(integrand, edges[k + 1], edges[k], Tolerance::relative(rel_tol));
            ok &= q.converged;
            error += q.error;
            below[k] = below[k + 1] + q.value;
        }
        if !ok {
            return Err(Error::NonConvergence("radial level table".into()));
        }
        Ok(RadialTable {
            pullback,
            edges,
            below,
            error,
            rel_tol,
        })
    }

    /// `∫₀^ρ s M(s) ds`.
    fn cumulative(&self, rho: f64) -> f64 {
        if rho >= 1.0 {
            return self.below[0];
        }
        if rho <= 0.0 {
            return 0.0;
        }
        // Panel index: edges[k+1] ≤ ρ < edges[k].
        let k = ((-rho.log2()).floor() as usize).min(self.edges.len() - 1);
        let (lo, base) = if k + 1 < self.edges.len() {
            (self.edges[k + 1], self.below[k + 1])
        } else {
            (0.0, 0.0)
        };
        if rho <= lo {
            return base;
        }
        let inner = (self.rel_tol * 1e-2).max(1e-15);
        let q = integrate(
            |s: f64| s * self.pullback.ring_mean(s, inner),
            lo,
            rho,
            Tolerance::relative(self.rel_tol),
        );
        base + q.value
    }

    fn x(&self, t: f64) -> f64 {
        2.0 * PI * self.cumulative((-2.0 * PI * t.max(0.0)).exp())
    }

    fn x0(&self, t: f64) -> f64 {
        let rho = (-2.0 * PI * t.max(0.0)).exp();
        4.0 * PI * PI * rho * rho * self.pullback.ring_mean(rho, (self.rel_tol * 1e-2).max(1e-15))
    }
}

/// Limit probes for `p → ∞` and `t → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitProbe {
    pub p_probe: f64,
    pub t_probe: f64,
    /// `F(p_probe)`.
    pub moment_probe: f64,
    pub moment_error: f64,
    /// `e^{4πκ t_probe} X(t_probe)`.
    pub tail_probe: f64,
    /// `π(e^{u(a)} R_Ω(a))²` when `κ = 1`, otherwise 0.
    pub expected: f64,
}

/// A scenario prepared for level-set computations.
pub struct GreenModel {
    scenario: Scenario,
    b: ComplexPoint,
    a: ComplexPoint,
    summary: CurvatureSummary,
    table: Arc<RadialTable>,
    moments: Mutex<BTreeMap<u64, PowerMoment>>,
}

impl std::fmt::Debug for GreenModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GreenModel")
            .field("b", &self.b)
            .field("summary", &self.summary)
            .finish_non_exhaustive()
    }
}

fn resolve_pole(map: &AnalyticMap, pole: Pole) -> Result<(ComplexPoint, ComplexPoint)> {
    match pole {
        Pole::Domain(a) => Ok((map_invert(map, a, INVERT_TOL)?, a)),
        Pole::Preimage(b) => Ok((b, map.eval(b))),
    }
}

impl GreenModel {
    pub fn new(scenario: Scenario) -> Result<Self> {
        let s = &scenario;
        if !(s.quad_tol > 0.0 && s.quad_tol < 1e-2) {
            return Err(Error::InvalidScenario(format!(
                "quad_tol must lie in (0, 1e-2), got {}",
                s.quad_tol
            )));
        }
        if !(s.t_max > 0.0 && s.t_max <= MAX_T) {
            return Err(Error::InvalidScenario(format!(
                "t_max must lie in (0, {MAX_T}], got {}",
                s.t_max
            )));
        }
        if s.p_grid.iter().any(|p| !(p.is_finite() && *p > -1.0)) {
            return Err(Error::InvalidScenario(
                "p_grid entries must be finite and exceed -1".into(),
            ));
        }
        if s.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidScenario("p_grid must be strictly increasing".into()));
        }
        let (b, a) = resolve_pole(&s.map, s.pole)?;
        if !(b.norm() <= MAX_POLE_PREIMAGE) {
            return Err(Error::InvalidScenario(format!(
                "pole preimage |f⁻¹(a)| = {} exceeds {MAX_POLE_PREIMAGE}",
                b.norm()
            )));
        }
        let summary = curvature_summary(&s.map, &s.factor, s.quad_tol)?;
        if summary.kappa > 0.0 {
            let needed = 3.0 / (4.0 * PI * summary.kappa);
            if s.t_max < needed {
                return Err(Error::InvalidScenario(format!(
                    "t_max = {} is below 3/(4πκ) = {needed}",
                    s.t_max
                )));
            }
        }
        let pullback = Pullback {
            map: s.map.clone(),
            factor: s.factor.clone(),
            b,
        };
        let r_min = 0.5 * (-2.0 * PI * s.t_max).exp();
        let table = RadialTable::build(pullback, r_min, s.quad_tol * 1e-2)?;
        Ok(GreenModel {
            scenario,
            b,
            a,
            summary,
            table: Arc::new(table),
            moments: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn pole(&self) -> ComplexPoint {
        self.a
    }

    pub fn pole_preimage(&self) -> ComplexPoint {
        self.b
    }

    pub fn summary(&self) -> &CurvatureSummary {
        &self.summary
    }

    pub fn kappa(&self) -> f64 {
        self.summary.kappa
    }

    /// Decay budget `c = 4πκ`.
    pub fn decay(&self) -> f64 {
        4.0 * PI * self.summary.kappa
    }

    pub fn require_admissible(&self) -> Result<()> {
        if self.summary.kappa > 0.0 {
            Ok(())
        } else {
            Err(Error::Inadmissible(self.summary.kappa))
        }
    }

    /// `X(t) = A_σ(Ω_t)` from the radial table.
    pub fn x(&self, t: f64) -> f64 {
        self.table.x(t)
    }

    /// `X₀(t) = -X′(t)`.
    pub fn x0(&self, t: f64) -> f64 {
        self.table.x0(t)
    }

    /// `E(w)` on the pulled-back disk.
    pub fn energy(&self, w: ComplexPoint) -> f64 {
        self.table.pullback.energy(w)
    }

    /// Error estimate of the radial table, in area units.
    pub fn table_error(&self) -> f64 {
        2.0 * PI * self.table.error
    }

    /// `(X, X₀, c = 4πκ)` as a validated-ready monotone profile.
    pub fn profile(&self) -> Result<MonotoneProfile> {
        self.require_admissible()?;
        let tx = Arc::clone(&self.table);
        let td = Arc::clone(&self.table);
        Ok(MonotoneProfile::new(
            move |t| tx.x(t),
            self.decay(),
            uniform_grid(self.scenario.t_max, PROFILE_GRID),
        )?
        .with_density(move |t| td.x0(t)))
    }

    /// `Y_p(0) = ∫_Ω g_Ω(z, a)^p e^{2u} dA`.
    pub fn green_moment(&self, p: f64) -> Result<PowerMoment> {
        let key = p.to_bits();
        if let Some(m) = self.moments.lock().expect("moment cache").get(&key) {
            return Ok(*m);
        }
        let profile = self.profile()?;
        let m = stieltjes::moment(&profile, p, self.scenario.quad_tol)?;
        self.moments.lock().expect("moment cache").insert(key, m);
        Ok(m)
    }

    /// `F(p) = (4πκ)^p Y_p(0) / Γ(p+1)` with its absolute error estimate.
    pub fn f_functional(&self, p: f64) -> Result<(f64, f64)> {
        self.require_admissible()?;
        let m = self.green_moment(p)?;
        stieltjes::normalize(&m, self.decay())
    }

    /// `∫_{∂Ω} e^{2u} / (∂g/∂n) dL` through `X₀(0) = 4π² M(1)`.
    pub fn boundary_functional(&self) -> f64 {
        self.x0(0.0)
    }

    /// The same boundary integral by direct quadrature in `θ`.
    pub fn boundary_functional_direct(&self) -> Result<f64> {
        let f = &self.scenario.map;
        let u = &self.scenario.factor;
        let failure = std::cell::RefCell::new(None);
        let q = periodic_mean(
            |theta| {
                let w = unit(theta);
                let dn = match green_normal_boundary_preimage(f, theta, self.b) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        return f64::NAN;
                    }
                };
                u.density(f.eval(w)) / dn * f.deriv(w).norm()
            },
            1e-13,
            64,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(2.0 * PI * q.value)
    }

    /// `R_Ω(a)` and `e^{u(a)}`.
    pub fn conformal_radius(&self) -> Result<(f64, f64)> {
        let r = conformal_radius_preimage(&self.scenario.map, self.b)?;
        Ok((r.radius, self.scenario.factor.u(self.a).exp()))
    }

    /// `π (e^{u(a)} R_Ω(a))²`.
    pub fn limit_value(&self) -> Result<f64> {
        let (r, eu) = self.conformal_radius()?;
        Ok(PI * (eu * r).powi(2))
    }

    /// For `u = ln|g′|`: `(e^{u(a)} R_Ω(a), R_{g(Ω)}(g(a)))`.
    pub fn logderiv_radii(&self) -> Result<Option<(f64, f64)>> {
        let ConformalFactor::LogDeriv { g } = &self.scenario.factor else {
            return Ok(None);
        };
        let (r, eu) = self.conformal_radius()?;
        let composite = g.compose(&self.scenario.map)?;
        let image = conformal_radius_preimage(&composite, self.b)?;
        Ok(Some((eu * r, image.radius)))
    }

    pub fn limit_p_infinity(&self, p_probe: f64, t_probe: f64) -> Result<LimitProbe> {
        self.require_admissible()?;
        if p_probe < 20.0 {
            return Err(Error::Domain(format!("p_probe must be at least 20, got {p_probe}")));
        }
        let c = self.decay();
        if t_probe < 2.0 / c || t_probe > self.scenario.t_max {
            return Err(Error::Domain(format!(
                "t_probe must lie in [2/(4πκ), t_max] = [{}, {}], got {t_probe}",
                2.0 / c,
                self.scenario.t_max
            )));
        }
        let (moment_probe, moment_error) = self.f_functional(p_probe)?;
        let tail_probe = (c * t_probe).exp() * self.x(t_probe);
        let expected = if self.summary.kappa == 1.0 {
            self.limit_value()?
        } else {
            0.0
        };
        Ok(LimitProbe {
            p_probe,
            t_probe,
            moment_probe,
            moment_error,
            tail_probe,
            expected,
        })
    }

    /// `(−ΔX/Δt, X₀(t))`: second-order one-sided at `t = 0`, centered elsewhere.
    pub fn derivative_consistency(&self, t: f64, h: f64) -> (f64, f64) {
        let fd = if t < h {
            -(-3.0 * self.x(t) + 4.0 * self.x(t + h) - self.x(t + 2.0 * h)) / (2.0 * h)
        } else {
            -(self.x(t + h) - self.x(t - h)) / (2.0 * h)
        };
        (fd, self.x0(t))
    }

    /// `∫_Ω g^p e^{2u} dA` by direct 2D quadrature around the pole, excising
    /// the disk of radius `excision` about `b` in preimage coordinates.
    pub fn direct_moment(&self, p: f64, excision: f64) -> Result<f64> {
        if !(p >= 0.0) {
            return Err(Error::InvalidExponent(p));
        }
        let f = &self.scenario.map;
        let u = &self.scenario.factor;
        let b = self.b;
        let inner_tol = Tolerance::relative(1e-11);
        let angular = |theta: f64| {
            let e = unit(theta);
            // |b + s e| = 1
            let proj = (b.conj() * e).re;
            let s_max = -proj + (proj * proj + 1.0 - b.norm_sqr()).sqrt();
            // v = b + e^σ e, dA = e^{2σ} dσ dθ
            let integrand = |sigma: f64| {
                let s = sigma.exp();
                let v = b + e * s;
                let psi = mobius_unchecked(b, v).norm();
                if psi >= 1.0 {
                    return 0.0;
                }
                let g = -psi.ln() / (2.0 * PI);
                g.powf(p) * u.density(f.eval(v)) * f.deriv(v).norm_sqr() * s * s
            };
            let q = integrate(integrand, excision.ln(), s_max.ln(), inner_tol);
            q.value
        };
        let q = periodic_mean(angular, 1e-10, 32);
        if !q.converged {
            return Err(Error::NonConvergence("direct 2D moment".into()));
        }
        Ok(2.0 * PI * q.value)
    }
}

/// `X(t)` by direct adaptive quadrature, independent of the radial table.
pub fn sublevel_area(s: &Scenario, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("level t must be nonnegative, got {t}")));
    }
    let (b, _) = resolve_pole(&s.map, s.pole)?;
    let pb = Pullback {
        map: s.map.clone(),
        factor: s.factor.clone(),
        b,
    };
    let rho = (-2.0 * PI * t).exp();
    let inner = (s.quad_tol * 1e-2).max(1e-15);
    let q = integrate(
        |r: f64| r * pb.ring_mean(r, inner),
        0.0,
        rho,
        Tolerance::relative(s.quad_tol),
    );
    if !q.converged {
        return Err(Error::NonConvergence(format!("sublevel area at t = {t}")));
    }
    Ok(2.0 * PI * q.value)
}

/// `X₀(t) = 4π² ρ² M(ρ)` directly.
pub fn ring_derivative(s: &Scenario, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("level t must be nonnegative, got {t}")));
    }
    let (b, _) = resolve_pole(&s.map, s.pole)?;
    let pb = Pullback {
        map: s.map.clone(),
        factor: s.factor.clone(),
        b,
    };
    let rho = (-2.0 * PI * t).exp();
    Ok(4.0 * PI * PI * rho * rho * pb.ring_mean(rho, (s.quad_tol * 1e-2).max(1e-15)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::StantonWeight;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> ComplexPoint {
        Complex64::new(re, im)
    }

    fn disk() -> Scenario {
        Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.0, 0.0)),
        )
    }

    fn quadratic() -> Scenario {
        Scenario::new(
            AnalyticMap::from_real(&[1.0, 0.2]).unwrap(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.0, 0.0)),
        )
    }

    fn cap() -> Scenario {
        Scenario::new(
            AnalyticMap::scaling(0.5).unwrap(),
            ConformalFactor::Spherical { lambda: 1.0 },
            Pole::Domain(c(0.0, 0.0)),
        )
    }

    #[test]
    fn sublevel_area_examples() {
        let s = disk();
        for t in [0.0, 0.1, 0.5] {
            let x = sublevel_area(&s, t).unwrap();
            assert!((x - PI * (-4.0 * PI * t).exp()).abs() < 1e-12);
        }
        let s2 = Scenario::new(
            AnalyticMap::scaling(2.0).unwrap(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.0, 0.0)),
        );
        assert!((sublevel_area(&s2, 0.0).unwrap() - 4.0 * PI).abs() < 1e-12);
        let off = Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.5, 0.0)),
        );
        assert!((sublevel_area(&off, 0.0).unwrap() - PI).abs() < 1e-9);
    }

    #[test]
    fn ring_derivative_examples() {
        let s = disk();
        assert!((ring_derivative(&s, 0.0).unwrap() - 4.0 * PI * PI).abs() < 1e-12);
        let v = ring_derivative(&s, 1.0).unwrap();
        let exact = 4.0 * PI * PI * (-4.0 * PI).exp();
        assert!(((v - exact) / exact).abs() < 1e-12);
        let s2 = Scenario::new(
            AnalyticMap::scaling(2.0).unwrap(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.0, 0.0)),
        );
        assert!((ring_derivative(&s2, 0.0).unwrap() - 16.0 * PI * PI).abs() < 1e-11);
    }

    #[test]
    fn table_matches_direct_area() {
        let s = quadratic().with_p_grid(vec![0.0, 1.0]);
        let m = GreenModel::new(s.clone()).unwrap();
        for t in [0.0, 0.03, 0.2, 1.0, 3.0] {
            let a = m.x(t);
            let d = sublevel_area(&s, t).unwrap();
            assert!(((a - d) / d).abs() < 1e-10, "t = {t}: {a} vs {d}");
        }
        // X(ρ) = π(ρ² + 0.08ρ⁴) for the quadratic map about 0.
        for t in [0.0, 0.1, 0.7] {
            let rho2 = (-4.0 * PI * t).exp();
            let exact = PI * (rho2 + 0.08 * rho2 * rho2);
            assert!(((m.x(t) - exact) / exact).abs() < 1e-11);
        }
    }

    #[test]
    fn disk_moments() {
        let m = GreenModel::new(disk()).unwrap();
        assert!((m.green_moment(1.0).unwrap().value - 0.25).abs() < 1e-10);
        assert!((m.green_moment(0.0).unwrap().value - PI).abs() < 1e-12);
        assert!((m.green_moment(2.0).unwrap().value - 1.0 / (8.0 * PI)).abs() < 1e-11);
        for p in [0.0, 1.0, 2.0, 5.0] {
            let (f, _) = m.f_functional(p).unwrap();
            assert!((f - PI).abs() < 1e-8, "p = {p}: {f}");
        }
    }

    #[test]
    fn scaled_disk_functional() {
        let s = Scenario::new(
            AnalyticMap::scaling(2.0).unwrap(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.0, 0.0)),
        );
        let m = GreenModel::new(s).unwrap();
        for p in [0.0, 1.0, 2.0] {
            assert!((m.f_functional(p).unwrap().0 - 4.0 * PI).abs() < 1e-8);
        }
    }

    #[test]
    fn quadratic_functional_closed_form() {
        // F(p) = π + 0.08π · 2^{-p}
        let m = GreenModel::new(quadratic()).unwrap();
        for p in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let (f, _) = m.f_functional(p).unwrap();
            let exact = PI + 0.08 * PI * 2f64.powf(-p);
            assert!((f - exact).abs() < 1e-8, "p = {p}: {f} vs {exact}");
        }
    }

    #[test]
    fn cap_strictly_decreases() {
        let m = GreenModel::new(cap()).unwrap();
        let (f0, _) = m.f_functional(0.0).unwrap();
        let (f1, _) = m.f_functional(1.0).unwrap();
        assert!((f0 - 0.8 * PI).abs() < 1e-9);
        assert!(f1 < f0);
        // X(ρ) = πρ²/(1 + ρ²/4) for the cap.
        for t in [0.0, 0.2] {
            let r2 = (-4.0 * PI * t).exp();
            let exact = PI * r2 / (1.0 + r2 / 4.0);
            assert!(((m.x(t) - exact) / exact).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_functional_routes_agree() {
        let m = GreenModel::new(disk()).unwrap();
        assert!((m.boundary_functional() - 4.0 * PI * PI).abs() < 1e-10);
        let off = GreenModel::new(Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.5, 0.0)),
        ))
        .unwrap();
        let exact = 4.0 * PI * PI * 1.25 / 0.75;
        assert!((off.boundary_functional() - exact).abs() < 1e-9);
        assert!((off.boundary_functional_direct().unwrap() - exact).abs() < 1e-9);
        let q = GreenModel::new(quadratic()).unwrap();
        let (a, d) = (q.boundary_functional(), q.boundary_functional_direct().unwrap());
        assert!(((a - d) / d).abs() < 1e-10);
    }

    #[test]
    fn profile_validates() {
        for s in [disk(), quadratic(), cap()] {
            let m = GreenModel::new(s).unwrap();
            let v = stieltjes::profile_validate(&m.profile().unwrap());
            assert!(v.is_empty(), "{v:?}");
        }
    }

    #[test]
    fn limits() {
        let m = GreenModel::new(disk()).unwrap();
        let l = m.limit_p_infinity(40.0, 8.0).unwrap();
        assert!((l.moment_probe - PI).abs() < 1e-8);
        assert!((l.tail_probe - PI).abs() < 1e-8);
        assert_eq!(l.expected, PI);
        let off = GreenModel::new(Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::Flat,
            Pole::Domain(c(0.5, 0.0)),
        ))
        .unwrap();
        let l = off.limit_p_infinity(40.0, 8.0).unwrap();
        assert!((l.expected - 0.5625 * PI).abs() < 1e-12);
        assert!((l.moment_probe - l.expected).abs() < 1e-4);
        assert!((l.tail_probe - l.expected).abs() < 1e-4);
        let capm = GreenModel::new(cap()).unwrap();
        let l = capm.limit_p_infinity(40.0, 8.0).unwrap();
        assert_eq!(l.expected, 0.0);
        assert!(l.moment_probe <= 1e-3 && l.tail_probe <= 1e-3);
        assert!(m.limit_p_infinity(10.0, 8.0).is_err());
    }

    #[test]
    fn derivative_consistency() {
        let m = GreenModel::new(quadratic()).unwrap();
        for t in [0.0, 0.05, 0.1] {
            let (fd, x0) = m.derivative_consistency(t, 1e-4);
            assert!(((fd - x0) / x0).abs() < 1e-6, "t = {t}: {fd} vs {x0}");
        }
    }

    #[test]
    fn direct_moment_matches_levels() {
        let m = GreenModel::new(quadratic()).unwrap();
        for p in [1.0, 2.0] {
            let d = m.direct_moment(p, 1e-6).unwrap();
            let l = m.green_moment(p).unwrap().value;
            assert!(((d - l) / l).abs() < 1e-6, "p = {p}: {d} vs {l}");
        }
    }

    #[test]
    fn logderiv_radius_cross_check() {
        let g = AnalyticMap::from_real(&[1.0, 0.1]).unwrap();
        let s = Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::LogDeriv { g },
            Pole::Domain(c(0.3, 0.0)),
        );
        let m = GreenModel::new(s).unwrap();
        let (a, b) = m.logderiv_radii().unwrap().unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn scenario_validation() {
        let far = Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::Flat,
            Pole::Preimage(c(0.96, 0.0)),
        );
        assert!(matches!(GreenModel::new(far), Err(Error::InvalidScenario(_))));
        assert!(GreenModel::new(disk().with_t_max(0.1)).is_err());
        assert!(GreenModel::new(disk().with_quad_tol(0.0)).is_err());
        assert!(GreenModel::new(disk().with_p_grid(vec![1.0, 0.5])).is_err());
        assert!(GreenModel::new(disk().with_p_grid(vec![-1.0, 0.5])).is_err());
        let hot = Scenario::new(
            AnalyticMap::identity(),
            ConformalFactor::Stanton {
                weight: StantonWeight::Gaussian { alpha: 1.5 },
            },
            Pole::Domain(c(0.0, 0.0)),
        );
        let m = GreenModel::new(hot).unwrap();
        assert!(m.kappa() < 0.0);
        assert!(matches!(m.f_functional(1.0), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn preimage_pole_is_exact() {
        let s = Scenario::new(
            AnalyticMap::from_real(&[1.0, 0.2]).unwrap(),
            ConformalFactor::Flat,
            Pole::Preimage(c(0.5, 0.0)),
        );
        let m = GreenModel::new(s).unwrap();
        assert_eq!(m.pole(), c(0.55, 0.0));
        assert_eq!(m.pole_preimage(), c(0.5, 0.0));
    }
}
