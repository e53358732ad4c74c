//! Inequality checkers. Each returns [`CheckResult`]s with `lhs ≤ rhs`.

use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::greenint::GreenModel;
use crate::metric::ConformalFactor;
use crate::special::{ln_gamma, pi_p_over_sin};
use crate::stieltjes;

/// Exponent used by the negative-`p` checks when run as part of a suite.
pub const NEGATIVE_P: f64 = -0.5;
/// Probes for the `p → -1⁺` trend.
pub const NEGATIVE_P_TREND: [f64; 2] = [-0.9, -0.99];
/// Relative band for the `p → -1⁺` limit.
pub const NEGATIVE_P_BAND: f64 = 0.05;
pub const LIMIT_P_PROBE: f64 = 40.0;
/// Agreement band between the two limit probes, relative to `π`.
pub const LIMIT_AGREEMENT: f64 = 1e-3;
/// Band for the limit value when `κ = 1`.
pub const LIMIT_VALUE_TOL: f64 = 1e-4;
/// Bound on both probes when `κ < 1`.
pub const LIMIT_ZERO_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Huber,
    Profile,
    Monotonicity,
    Chain,
    Classical,
    Stanton,
    NegativeP,
    Limit,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::Huber,
        CheckKind::Profile,
        CheckKind::Monotonicity,
        CheckKind::Chain,
        CheckKind::Classical,
        CheckKind::Stanton,
        CheckKind::NegativeP,
        CheckKind::Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Huber => "huber",
            CheckKind::Profile => "profile",
            CheckKind::Monotonicity => "monotonicity",
            CheckKind::Chain => "chain",
            CheckKind::Classical => "classical",
            CheckKind::Stanton => "stanton",
            CheckKind::NegativeP => "negative_p",
            CheckKind::Limit => "limit",
        }
    }

    /// Whether the check rests on `κ(Ω) > 0`.
    pub fn needs_admissible(self) -> bool {
        self != CheckKind::Huber
    }

    /// Whether the check applies to the given factor.
    pub fn applies_to(self, factor: &ConformalFactor) -> bool {
        match self {
            CheckKind::Classical => matches!(factor, ConformalFactor::Flat | ConformalFactor::LogDeriv { .. }),
            CheckKind::Stanton => matches!(factor, ConformalFactor::Stanton { .. }),
            _ => true,
        }
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown check {s:?}")))
    }
}

fn fmt_p(p: f64) -> String {
    format!("{p}")
}

/// `4πκ A_σ ≤ L_σ(∂Ω)²`.
pub fn check_huber(m: &GreenModel, tol: f64) -> CheckResult {
    let s = m.summary();
    let lhs = 4.0 * PI * s.kappa * s.area_sigma;
    let rhs = s.length_sigma * s.length_sigma;
    let err = (4.0 * PI + 2.0 * s.length_sigma) * s.error_estimate;
    CheckResult::new("huber", lhs, rhs, err, tol)
}

/// The level profile `X` is nonincreasing and so is `e^{4πκt}X(t)`; `lhs` is
/// the summed size of all grid violations.
pub fn check_profile(m: &GreenModel, tol: f64) -> Result<CheckResult> {
    let profile = m.profile()?;
    let violations = stieltjes::profile_validate(&profile);
    let total = violations.iter().fold(0.0, |acc, v| acc + v.amount);
    let mut c = CheckResult::new("profile", total, 0.0, 0.0, tol);
    // A sign condition, with no extremal case to flag.
    c.equality = false;
    Ok(c)
}

/// `F(p)` over a grid, evaluated in parallel and returned in grid order.
pub fn f_curve(m: &GreenModel, grid: &[f64]) -> Result<Vec<(f64, f64, f64)>> {
    grid.par_iter()
        .map(|&p| m.f_functional(p).map(|(f, e)| (p, f, e)))
        .collect()
}

/// `F(p_{k+1}) ≤ F(p_k)` for consecutive grid points; pairs starting below
/// zero are conjectural.
pub fn check_monotonicity(m: &GreenModel, grid: &[f64], tol: f64) -> Result<Vec<CheckResult>> {
    m.require_admissible()?;
    if grid.len() < 2 {
        return Err(Error::InvalidScenario(
            "monotonicity needs at least two exponents".into(),
        ));
    }
    let curve = f_curve(m, grid)?;
    Ok(curve
        .windows(2)
        .map(|w| {
            let (p1, f1, e1) = w[0];
            let (p2, f2, e2) = w[1];
            let c = CheckResult::new(
                format!("monotonicity[{}->{}]", fmt_p(p1), fmt_p(p2)),
                f2,
                f1,
                e1 + e2,
                tol,
            );
            if p1 < 0.0 {
                c.conjectural()
            } else {
                c
            }
        })
        .collect())
}

/// `4πκ F(p) ≤ L_σ² ≤ ∫_{∂Ω} e^{2u}(∂g/∂n)⁻¹ dL`.
pub fn check_chain(m: &GreenModel, p: f64, tol: f64) -> Result<Vec<CheckResult>> {
    m.require_admissible()?;
    if !(p > 0.0) {
        return Err(Error::Domain(format!("chain requires p > 0, got {p}")));
    }
    let s = m.summary();
    let (f, fe) = m.f_functional(p)?;
    let l2 = s.length_sigma * s.length_sigma;
    let l2_err = 2.0 * s.length_sigma * s.error_estimate;
    let c = m.decay();
    let bf = m.boundary_functional();
    Ok(vec![
        CheckResult::new(
            format!("chain[{}]:isoperimetric", fmt_p(p)),
            c * f,
            l2,
            c * fe + l2_err,
            tol,
        ),
        CheckResult::new(
            format!("chain[{}]:boundary", fmt_p(p)),
            l2,
            bf,
            l2_err + m.table_error(),
            tol,
        ),
    ])
}

/// Classical constants: `Y_p ≤ [Γ(p+1)(4π)^{-p} / (Γ(q+1)(4π)^{-q})] Y_q`
/// for flat metrics and `u = ln|g′|`. At `q = 0` and flat `u` the right side
/// is `Γ(p+1)(4π)^{-p} A`.
pub fn check_classical(m: &GreenModel, q: f64, p: f64, tol: f64) -> Result<CheckResult> {
    let factor = &m.scenario().factor;
    if !CheckKind::Classical.applies_to(factor) {
        return Err(Error::NotApplicable {
            check: "classical".into(),
            reason: "requires a flat or log-derivative factor".into(),
        });
    }
    if !(0.0 <= q && q < p) {
        return Err(Error::Domain(format!(
            "classical requires 0 <= q < p, got q = {q}, p = {p}"
        )));
    }
    let yp = m.green_moment(p)?;
    let yq = m.green_moment(q)?;
    let ln_const = ln_gamma(p + 1.0)? - p * (4.0 * PI).ln() - ln_gamma(q + 1.0)? + q * (4.0 * PI).ln();
    let k = ln_const.exp();
    Ok(CheckResult::new(
        format!("classical[{}->{}]", fmt_p(q), fmt_p(p)),
        yp.value,
        k * yq.value,
        yp.error_estimate() + k * yq.error_estimate(),
        tol,
    ))
}

/// `∫ g ΔΦ dA ≤ (4πκ)⁻¹ ∫ ΔΦ dA` with `e^{2u} = ΔΦ`.
pub fn check_stanton(m: &GreenModel, tol: f64) -> Result<CheckResult> {
    if !CheckKind::Stanton.applies_to(&m.scenario().factor) {
        return Err(Error::NotApplicable {
            check: "stanton".into(),
            reason: "requires a stanton weight".into(),
        });
    }
    m.require_admissible()?;
    let y1 = m.green_moment(1.0)?;
    let y0 = m.green_moment(0.0)?;
    let c = m.decay();
    Ok(CheckResult::new(
        "stanton",
        y1.value,
        y0.value / c,
        y1.error_estimate() + y0.error_estimate() / c,
        tol,
    ))
}

/// Negative exponents: the proven lower bound at `p`, the boundary bound
/// `A_σ ≤ X₀(0)/(4πκ)`, and the non-gating `p → -1⁺` trend.
pub fn check_negative_p(m: &GreenModel, p: f64, tol: f64) -> Result<Vec<CheckResult>> {
    m.require_admissible()?;
    if !(p > -1.0 && p < 0.0) {
        return Err(Error::Domain(format!("negative_p requires -1 < p < 0, got {p}")));
    }
    let c = m.decay();
    let y0 = m.green_moment(0.0)?;
    let yp = m.green_moment(p)?;
    let k = pi_p_over_sin(p) * (p * c.ln() - ln_gamma(1.0 + p)?).exp();
    let mut out = vec![CheckResult::new(
        format!("negative_p[{}]:lower", fmt_p(p)),
        y0.value,
        k * yp.value,
        y0.error_estimate() + k * yp.error_estimate(),
        tol,
    )];
    let bf = m.boundary_functional();
    out.push(CheckResult::new(
        "negative_p:boundary",
        y0.value,
        bf / c,
        y0.error_estimate() + m.table_error() / c,
        tol,
    ));
    let limit = bf / c;
    let [pa, pb] = NEGATIVE_P_TREND;
    let (na, ea) = m.f_functional(pa)?;
    let (nb, eb) = m.f_functional(pb)?;
    out.push(
        CheckResult::new(
            format!("negative_p:trend[{}->{}]", fmt_p(pa), fmt_p(pb)),
            (nb - limit).abs(),
            (na - limit).abs(),
            ea + eb,
            tol,
        )
        .conjectural(),
    );
    out.push(
        CheckResult::new(
            format!("negative_p:limit[{}]", fmt_p(pb)),
            (nb - limit).abs(),
            NEGATIVE_P_BAND * limit,
            eb,
            tol,
        )
        .conjectural(),
    );
    Ok(out)
}

/// `F(p) → π(e^{u(a)}R_Ω(a))²` and `e^{4πκt}X(t) → ` the same value when
/// `κ = 1`; both tend to zero when `κ < 1`.
pub fn check_limit(m: &GreenModel, tol: f64) -> Result<Vec<CheckResult>> {
    let l = m.limit_p_infinity(LIMIT_P_PROBE, m.scenario().t_max)?;
    let err = l.moment_error + m.table_error();
    let mut out = vec![CheckResult::new(
        "limit:agreement",
        (l.moment_probe - l.tail_probe).abs(),
        (LIMIT_AGREEMENT * PI).max(err),
        0.0,
        tol,
    )];
    if m.kappa() == 1.0 {
        out.push(CheckResult::new(
            "limit:value",
            (l.moment_probe - l.expected).abs(),
            LIMIT_VALUE_TOL,
            l.moment_error,
            tol,
        ));
    } else {
        out.push(CheckResult::new(
            "limit:value",
            l.moment_probe.max(l.tail_probe),
            LIMIT_ZERO_TOL,
            l.moment_error,
            tol,
        ));
    }
    if let Some((lhs, rhs)) = m.logderiv_radii()? {
        out.push(CheckResult::new(
            "limit:logderiv_radius",
            (lhs - rhs).abs(),
            1e-12 * rhs,
            0.0,
            tol,
        ));
    }
    Ok(out)
}

/// Expands the requested kinds: an empty request or `all` means every check
/// applicable to the factor.
pub fn resolve_checks(requested: &[CheckKind], factor: &ConformalFactor) -> Result<Vec<CheckKind>> {
    if requested.is_empty() {
        return Ok(CheckKind::ALL.into_iter().filter(|k| k.applies_to(factor)).collect());
    }
    for k in requested {
        if !k.applies_to(factor) {
            return Err(Error::NotApplicable {
                check: k.name().into(),
                reason: "not defined for this conformal factor".into(),
            });
        }
    }
    let mut out = requested.to_vec();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs the given checks in a fixed order.
pub fn run_checks(m: &GreenModel, kinds: &[CheckKind], tol: f64) -> Result<Vec<CheckResult>> {
    if kinds.iter().any(|k| k.needs_admissible()) {
        m.require_admissible()?;
    }
    let grid = m.scenario().p_grid.clone();
    let mut out = Vec::new();
    for &k in kinds {
        match k {
            CheckKind::Huber => out.push(check_huber(m, tol)),
            CheckKind::Profile => out.push(check_profile(m, tol)?),
            CheckKind::Monotonicity => out.extend(check_monotonicity(m, &grid, tol)?),
            CheckKind::Chain => {
                for &p in grid.iter().filter(|&&p| p > 0.0) {
                    out.extend(check_chain(m, p, tol)?);
                }
            }
            CheckKind::Classical => {
                for &p in grid.iter().filter(|&&p| p > 0.0) {
                    out.push(check_classical(m, 0.0, p, tol)?);
                }
            }
            CheckKind::Stanton => out.push(check_stanton(m, tol)?),
            CheckKind::NegativeP => out.extend(check_negative_p(m, NEGATIVE_P, tol)?),
            CheckKind::Limit => out.extend(check_limit(m, tol)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conformal::AnalyticMap;
    use crate::greenint::{Pole, Scenario};
    use crate::metric::StantonWeight;
    use num_complex::Complex64;

    const TOL: f64 = 1e-9;

    fn model(map: AnalyticMap, factor: ConformalFactor, a: (f64, f64)) -> GreenModel {
        GreenModel::new(Scenario::new(map, factor, Pole::Domain(Complex64::new(a.0, a.1)))).unwrap()
    }

    fn disk() -> GreenModel {
        model(AnalyticMap::identity(), ConformalFactor::Flat, (0.0, 0.0))
    }

    fn quadratic() -> GreenModel {
        model(
            AnalyticMap::from_real(&[1.0, 0.2]).unwrap(),
            ConformalFactor::Flat,
            (0.0, 0.0),
        )
    }

    fn cap() -> GreenModel {
        model(
            AnalyticMap::scaling(0.5).unwrap(),
            ConformalFactor::Spherical { lambda: 1.0 },
            (0.0, 0.0),
        )
    }

    #[test]
    fn huber_examples() {
        let h = check_huber(&disk(), TOL);
        assert!(h.pass && h.equality);
        assert!((h.lhs - 4.0 * PI * PI).abs() < 1e-9);
        let h = check_huber(&quadratic(), TOL);
        assert!(h.pass && !h.equality && h.margin > 0.0);
        let h = check_huber(&cap(), TOL);
        assert!((h.lhs - 48.0 * PI * PI / 25.0).abs() < 1e-8);
        assert!((h.rhs - 64.0 * PI * PI / 25.0).abs() < 1e-8);
    }

    #[test]
    fn monotonicity_examples() {
        assert_eq!(check_profile(&cap(), TOL).unwrap().lhs, 0.0);
        let r = check_monotonicity(&disk(), &[0.0, 1.0, 2.0], TOL).unwrap();
        assert!(r.iter().all(|c| c.pass && c.equality));
        assert_eq!(r[0].name, "monotonicity[0->1]");
        for m in [quadratic(), cap()] {
            let r = check_monotonicity(&m, &[0.0, 1.0], TOL).unwrap();
            assert!(r[0].pass && r[0].margin > 1e-3);
        }
        let r = check_monotonicity(&quadratic(), &[-0.5, 0.0, 1.0], TOL).unwrap();
        assert!(r[0].conjectural && !r[1].conjectural);
    }

    #[test]
    fn chain_examples() {
        let r = check_chain(&disk(), 1.0, TOL).unwrap();
        for c in &r {
            assert!(c.pass && c.equality, "{c:?}");
            assert!((c.rhs - 4.0 * PI * PI).abs() < 1e-6 * c.rhs);
        }
        let off = model(AnalyticMap::identity(), ConformalFactor::Flat, (0.5, 0.0));
        let r = check_chain(&off, 1.0, TOL).unwrap();
        assert!(r.iter().all(|c| c.pass && !c.equality));
        let r = check_chain(&quadratic(), 1.0, TOL).unwrap();
        assert!(r.iter().all(|c| c.pass && !c.equality));
    }

    #[test]
    fn classical_examples() {
        let m = disk();
        let c = check_classical(&m, 0.0, 1.0, TOL).unwrap();
        assert!((c.lhs - 0.25).abs() < 1e-10 && (c.rhs - 0.25).abs() < 1e-10 && c.equality);
        let c = check_classical(&m, 0.0, 2.0, TOL).unwrap();
        assert!((c.rhs - 1.0 / (8.0 * PI)).abs() < 1e-10 && c.equality);
        let scaled = model(
            AnalyticMap::identity(),
            ConformalFactor::LogDeriv {
                g: AnalyticMap::scaling(2.0).unwrap(),
            },
            (0.0, 0.0),
        );
        assert!(check_classical(&scaled, 0.0, 1.0, TOL).unwrap().equality);
        assert!(matches!(
            check_classical(&cap(), 0.0, 1.0, TOL),
            Err(Error::NotApplicable { .. })
        ));
    }

    #[test]
    fn stanton_examples() {
        let flat = model(
            AnalyticMap::identity(),
            ConformalFactor::Stanton {
                weight: StantonWeight::Constant { value: 1.0 },
            },
            (0.0, 0.0),
        );
        let c = check_stanton(&flat, TOL).unwrap();
        assert!((c.lhs - 0.25).abs() < 1e-10 && c.equality);
        let sph = model(
            AnalyticMap::scaling(0.5).unwrap(),
            ConformalFactor::Stanton {
                weight: StantonWeight::Spherical { lambda: 1.0 },
            },
            (0.0, 0.0),
        );
        let c = check_stanton(&sph, TOL).unwrap();
        assert!(c.pass && !c.equality);
        let g = AnalyticMap::from_real(&[1.0, 0.2]).unwrap();
        let harm = model(
            AnalyticMap::identity(),
            ConformalFactor::Stanton {
                weight: StantonWeight::AnalyticModulus { g },
            },
            (0.0, 0.0),
        );
        assert_eq!(harm.kappa(), 1.0);
        assert!(check_stanton(&harm, TOL).unwrap().pass);
        assert!(check_stanton(&disk(), TOL).is_err());
    }

    #[test]
    fn negative_p_examples() {
        let r = check_negative_p(&disk(), -0.5, TOL).unwrap();
        assert!((r[0].lhs - PI).abs() < 1e-10);
        assert!((r[0].rhs - PI * PI / 2.0).abs() < 1e-8);
        assert!(r.iter().all(|c| c.pass));
        assert!(r[2].conjectural && r[3].conjectural);
        let r = check_negative_p(&quadratic(), -0.5, TOL).unwrap();
        assert!(r[0].pass && r[0].margin > 0.0);
    }

    #[test]
    fn limit_checks() {
        for m in [
            disk(),
            cap(),
            model(AnalyticMap::identity(), ConformalFactor::Flat, (0.5, 0.0)),
        ] {
            let r = check_limit(&m, TOL).unwrap();
            assert!(r.iter().all(|c| c.pass), "{r:?}");
        }
    }

    #[test]
    fn dispatch() {
        let all = resolve_checks(&[], &ConformalFactor::Flat).unwrap();
        assert!(all.contains(&CheckKind::Classical) && !all.contains(&CheckKind::Stanton));
        assert!(resolve_checks(&[CheckKind::Stanton], &ConformalFactor::Flat).is_err());
        assert_eq!("negative_p".parse::<CheckKind>().unwrap(), CheckKind::NegativeP);
        assert!("bogus".parse::<CheckKind>().is_err());
        let r = run_checks(&disk(), &all, TOL).unwrap();
        assert!(r.iter().all(|c| c.pass), "{r:?}");
        let hot = model(
            AnalyticMap::identity(),
            ConformalFactor::Spherical { lambda: 1.2 },
            (0.0, 0.0),
        );
        assert!(matches!(run_checks(&hot, &all, TOL), Err(Error::Inadmissible(_))));
        assert!(run_checks(&hot, &[CheckKind::Huber], TOL).unwrap()[0].pass);
    }
}
