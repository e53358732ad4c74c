//! Conformal metrics `σ = e^{2u}|dz|²` on a domain and their curvature.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::conformal::{unit, AnalyticMap, ComplexPoint};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, periodic_mean, Tolerance};

/// Weights `w = e^{2u}` for the potential-weighted Green integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StantonWeight {
    /// `w ≡ value`.
    Constant { value: f64 },
    /// `w = e^{-α|z|²}`, so `Δ ln(1/w) = 4α`.
    Gaussian { alpha: f64 },
    /// `w = 4λ²/(1 + λ²|z|²)²`.
    Spherical { lambda: f64 },
    /// `w = |g′(z)|²`, harmonic `ln w`.
    AnalyticModulus { g: AnalyticMap },
}

/// The log-density `u` of a conformal metric, in domain coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConformalFactor {
    Flat,
    /// `u = ln|g′(z)|` for an analytic `g` defined on the domain.
    LogDeriv {
        g: AnalyticMap,
    },
    /// `u = ln(2λ/(1 + λ²|z|²))`, curvature `+1`.
    Spherical {
        lambda: f64,
    },
    /// `u = ln(2λ/(1 - λ²|z|²))` on `|z| < 1/λ`, curvature `-1`.
    Hyperbolic {
        lambda: f64,
    },
    /// `e^{2u} = ΔΦ` for a weight `ΔΦ > 0`.
    Stanton {
        weight: StantonWeight,
    },
}

impl ConformalFactor {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidFactor(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        match self {
            ConformalFactor::Flat | ConformalFactor::LogDeriv { .. } => Ok(()),
            ConformalFactor::Spherical { lambda } => positive("lambda", *lambda),
            ConformalFactor::Hyperbolic { lambda } => {
                positive("lambda", *lambda)?;
                if *lambda >= 1.0 {
                    return Err(Error::InvalidFactor(format!(
                        "hyperbolic lambda must lie in (0, 1), got {lambda}"
                    )));
                }
                Ok(())
            }
            ConformalFactor::Stanton { weight } => match weight {
                StantonWeight::Constant { value } => positive("weight value", *value),
                StantonWeight::Gaussian { alpha } => positive("alpha", *alpha),
                StantonWeight::Spherical { lambda } => positive("lambda", *lambda),
                StantonWeight::AnalyticModulus { .. } => Ok(()),
            },
        }
    }

    /// `e^{2u(z)}`.
    pub fn density(&self, z: ComplexPoint) -> f64 {
        let r2 = z.norm_sqr();
        match self {
            ConformalFactor::Flat => 1.0,
            ConformalFactor::LogDeriv { g } => g.deriv(z).norm_sqr(),
            ConformalFactor::Spherical { lambda } => {
                let l2 = lambda * lambda;
                4.0 * l2 / (1.0 + l2 * r2).powi(2)
            }
            ConformalFactor::Hyperbolic { lambda } => {
                let l2 = lambda * lambda;
                4.0 * l2 / (1.0 - l2 * r2).powi(2)
            }
            ConformalFactor::Stanton { weight } => match weight {
                StantonWeight::Constant { value } => *value,
                StantonWeight::Gaussian { alpha } => (-alpha * r2).exp(),
                StantonWeight::Spherical { lambda } => {
                    let l2 = lambda * lambda;
                    4.0 * l2 / (1.0 + l2 * r2).powi(2)
                }
                StantonWeight::AnalyticModulus { g } => g.deriv(z).norm_sqr(),
            },
        }
    }

    /// `u(z)`.
    pub fn u(&self, z: ComplexPoint) -> f64 {
        match self {
            ConformalFactor::Flat => 0.0,
            ConformalFactor::LogDeriv { g } => g.deriv(z).norm().ln(),
            _ => 0.5 * self.density(z).ln(),
        }
    }

    /// `Δu(z)` in closed form.
    pub fn laplacian_u(&self, z: ComplexPoint) -> f64 {
        let r2 = z.norm_sqr();
        match self {
            ConformalFactor::Flat | ConformalFactor::LogDeriv { .. } => 0.0,
            ConformalFactor::Spherical { lambda } => {
                let l2 = lambda * lambda;
                -4.0 * l2 / (1.0 + l2 * r2).powi(2)
            }
            ConformalFactor::Hyperbolic { lambda } => {
                let l2 = lambda * lambda;
                4.0 * l2 / (1.0 - l2 * r2).powi(2)
            }
            ConformalFactor::Stanton { weight } => -0.5 * weight.laplacian_ln_inverse(z),
        }
    }

    /// True when `Δu ≡ 0`.
    pub fn is_harmonic(&self) -> bool {
        matches!(
            self,
            ConformalFactor::Flat
                | ConformalFactor::LogDeriv { .. }
                | ConformalFactor::Stanton {
                    weight: StantonWeight::Constant { .. } | StantonWeight::AnalyticModulus { .. }
                }
        )
    }

    /// Largest `|z|` on which the factor is defined.
    fn radius_of_definition(&self) -> f64 {
        match self {
            ConformalFactor::Hyperbolic { lambda } => 1.0 / lambda,
            _ => f64::INFINITY,
        }
    }
}

impl StantonWeight {
    /// `Δ ln(1/w)` in closed form.
    pub fn laplacian_ln_inverse(&self, z: ComplexPoint) -> f64 {
        match self {
            StantonWeight::Constant { .. } | StantonWeight::AnalyticModulus { .. } => 0.0,
            StantonWeight::Gaussian { alpha } => 4.0 * alpha,
            StantonWeight::Spherical { lambda } => {
                let l2 = lambda * lambda;
                8.0 * l2 / (1.0 + l2 * z.norm_sqr()).powi(2)
            }
        }
    }
}

/// `K_σ(z) = -e^{-2u(z)} Δu(z)`.
pub fn gauss_curvature(u: &ConformalFactor, z: ComplexPoint) -> Result<f64> {
    let d = u.density(z);
    if !(d > 0.0 && d.is_finite()) || z.norm() >= u.radius_of_definition() {
        return Err(Error::Domain(format!(
            "conformal factor undefined at {} + {}i",
            z.re, z.im
        )));
    }
    Ok(-u.laplacian_u(z) / d)
}

pub fn k_plus(u: &ConformalFactor, z: ComplexPoint) -> Result<f64> {
    Ok(gauss_curvature(u, z)?.max(0.0))
}

pub fn k_minus(u: &ConformalFactor, z: ComplexPoint) -> Result<f64> {
    Ok((-gauss_curvature(u, z)?).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSummary {
    pub kappa: f64,
    pub total_k_plus: f64,
    pub area_sigma: f64,
    pub length_sigma: f64,
    /// Sum of the quadrature error estimates of the three integrals.
    pub error_estimate: f64,
}

/// `2π ∫₀¹ r · mean_θ F(re^{iθ}) dr`, the integral of `F` over the unit disk.
pub(crate) fn disk_integral<F>(f: F, quad_tol: f64) -> Result<(f64, f64)>
where
    F: Fn(ComplexPoint) -> f64,
{
    let inner_tol = (quad_tol * 1e-2).max(1e-15);
    let radial = |r: f64| {
        if r == 0.0 {
            return 0.0;
        }
        r * periodic_mean(|t| f(unit(t) * r), inner_tol, 32).value
    };
    let q = integrate(
        radial,
        0.0,
        1.0,
        Tolerance::relative(0.0).with_abs(quad_tol / (2.0 * PI)),
    );
    if !q.converged {
        return Err(Error::NonConvergence(format!("disk integral: error {:e}", q.error)));
    }
    Ok((2.0 * PI * q.value, 2.0 * PI * q.error))
}

/// Curvature defect, `σ`-area and `σ`-perimeter of `Ω = f(𝔻)`.
pub fn curvature_summary(f: &AnalyticMap, u: &ConformalFactor, quad_tol: f64) -> Result<CurvatureSummary> {
    if !(quad_tol > 0.0) {
        return Err(Error::Domain(format!("quad_tol must be positive, got {quad_tol}")));
    }
    u.validate()?;
    let outer = f.outer_radius();
    if outer >= u.radius_of_definition() {
        return Err(Error::InvalidFactor(format!(
            "domain reaches |z| = {outer}, beyond the factor's radius {}",
            u.radius_of_definition()
        )));
    }
    let (total_k_plus, e1) = if u.is_harmonic() {
        (0.0, 0.0)
    } else {
        disk_integral(
            |w| (-u.laplacian_u(f.eval(w))).max(0.0) * f.deriv(w).norm_sqr(),
            quad_tol,
        )?
    };
    let (area_sigma, e2) = disk_integral(|w| u.density(f.eval(w)) * f.deriv(w).norm_sqr(), quad_tol)?;
    let boundary = periodic_mean(
        |t| {
            let w = unit(t);
            u.density(f.eval(w)).sqrt() * f.deriv(w).norm()
        },
        (quad_tol * 1e-2).max(1e-15),
        64,
    );
    if !boundary.converged {
        return Err(Error::NonConvergence("boundary length".into()));
    }
    let length_sigma = 2.0 * PI * boundary.value;
    Ok(CurvatureSummary {
        kappa: 1.0 - total_k_plus / (2.0 * PI),
        total_k_plus,
        area_sigma,
        length_sigma,
        error_estimate: e1 + e2 + 2.0 * PI * boundary.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexPoint {
        Complex64::new(re, im)
    }

    /// Five-point finite-difference Laplacian of `u`.
    fn fd_laplacian(u: &ConformalFactor, z: ComplexPoint) -> f64 {
        let h = 1e-3;
        let f = |dx: f64, dy: f64| u.u(z + c(dx, dy));
        let d2 = |g: &dyn Fn(f64) -> f64| {
            (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h)) / (12.0 * h * h)
        };
        d2(&|s| f(s, 0.0)) + d2(&|s| f(0.0, s))
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(gauss_curvature(&ConformalFactor::Flat, c(0.7, 0.1)).unwrap(), 0.0);
        let k = gauss_curvature(&ConformalFactor::Spherical { lambda: 1.0 }, c(0.3, 0.0)).unwrap();
        assert!((k - 1.0).abs() < 1e-14);
        let k = gauss_curvature(&ConformalFactor::Hyperbolic { lambda: 1.0 }, c(0.5, 0.0)).unwrap();
        assert!((k + 1.0).abs() < 1e-14);
        assert!(gauss_curvature(&ConformalFactor::Hyperbolic { lambda: 1.0 }, c(1.5, 0.0)).is_err());
        let s = ConformalFactor::Spherical { lambda: 1.0 };
        assert_eq!(
            k_plus(&s, c(0.1, 0.0)).unwrap(),
            gauss_curvature(&s, c(0.1, 0.0)).unwrap()
        );
        assert_eq!(k_minus(&s, c(0.1, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_laplacians_match_finite_differences() {
        let g = AnalyticMap::from_real(&[1.0, 0.3]).unwrap();
        let factors = [
            ConformalFactor::Spherical { lambda: 0.8 },
            ConformalFactor::Hyperbolic { lambda: 0.7 },
            ConformalFactor::LogDeriv { g: g.clone() },
            ConformalFactor::Stanton {
                weight: StantonWeight::Gaussian { alpha: 0.4 },
            },
            ConformalFactor::Stanton {
                weight: StantonWeight::Spherical { lambda: 1.3 },
            },
            ConformalFactor::Stanton {
                weight: StantonWeight::AnalyticModulus { g },
            },
        ];
        for u in &factors {
            for z in [c(0.2, 0.1), c(-0.4, 0.3), c(0.0, -0.6)] {
                let exact = u.laplacian_u(z);
                let fd = fd_laplacian(u, z);
                assert!(
                    (exact - fd).abs() < 1e-6 * (1.0 + exact.abs()),
                    "{u:?} at {z}: {exact} vs {fd}"
                );
            }
        }
    }

    #[test]
    fn flat_unit_disk_summary() {
        let s = curvature_summary(&AnalyticMap::identity(), &ConformalFactor::Flat, 1e-10).unwrap();
        assert_eq!(s.kappa, 1.0);
        assert!((s.area_sigma - PI).abs() < 1e-10);
        assert!((s.length_sigma - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn spherical_cap_summary() {
        let f = AnalyticMap::scaling(0.5).unwrap();
        let s = curvature_summary(&f, &ConformalFactor::Spherical { lambda: 1.0 }, 1e-10).unwrap();
        assert!((s.kappa - 0.6).abs() < 1e-9);
        assert!((s.total_k_plus - 0.8 * PI).abs() < 1e-9);
        assert!((s.area_sigma - 0.8 * PI).abs() < 1e-9);
        assert!((s.length_sigma - 1.6 * PI).abs() < 1e-9);
    }

    #[test]
    fn hyperbolic_has_no_positive_curvature() {
        let f = AnalyticMap::identity();
        let s = curvature_summary(&f, &ConformalFactor::Hyperbolic { lambda: 0.9 }, 1e-10).unwrap();
        assert_eq!(s.kappa, 1.0);
        assert_eq!(s.total_k_plus, 0.0);
        assert!(curvature_summary(
            &AnalyticMap::scaling(1.2).unwrap(),
            &ConformalFactor::Hyperbolic { lambda: 0.9 },
            1e-10
        )
        .is_err());
    }

    #[test]
    fn polynomial_area_formula() {
        // area of f(𝔻) is π Σ k |c_k|²
        let f = AnalyticMap::from_real(&[1.0, 0.2]).unwrap();
        let s = curvature_summary(&f, &ConformalFactor::Flat, 1e-11).unwrap();
        assert!((s.area_sigma - 1.08 * PI).abs() < 1e-10);
        assert!(s.length_sigma.powi(2) > 4.0 * PI * s.area_sigma);
    }

    #[test]
    fn gaussian_defect() {
        // ∫_𝔻 2α dA = 2πα
        let u = ConformalFactor::Stanton {
            weight: StantonWeight::Gaussian { alpha: 0.5 },
        };
        let s = curvature_summary(&AnalyticMap::identity(), &u, 1e-10).unwrap();
        assert!((s.kappa - 0.5).abs() < 1e-9);
        // A = ∫ e^{-αr²} dA = π(1 - e^{-α})/α
        assert!((s.area_sigma - PI * (1.0 - (-0.5f64).exp()) / 0.5).abs() < 1e-9);
    }

    #[test]
    fn invalid_factors() {
        assert!(ConformalFactor::Spherical { lambda: -1.0 }.validate().is_err());
        assert!(ConformalFactor::Hyperbolic { lambda: 1.0 }.validate().is_err());
        assert!(ConformalFactor::Stanton {
            weight: StantonWeight::Constant { value: 0.0 }
        }
        .validate()
        .is_err());
    }

    #[test]
    fn gauss_bonnet_on_round_caps() {
        // ∫ K dA_σ and ∫ max{-Δu, 0} dA agree for K ≥ 0.
        for (lambda, rho) in [(1.0, 0.5), (0.7, 0.9), (2.0, 0.3)] {
            let f = AnalyticMap::scaling(rho).unwrap();
            let u = ConformalFactor::Spherical { lambda };
            let s = curvature_summary(&f, &u, 1e-11).unwrap();
            let (curv, _) = disk_integral(
                |w| {
                    let z = f.eval(w);
                    gauss_curvature(&u, z).unwrap() * u.density(z) * f.deriv(w).norm_sqr()
                },
                1e-11,
            )
            .unwrap();
            assert!((curv - s.total_k_plus).abs() < 1e-8);
            let l2r2 = lambda * lambda * rho * rho;
            assert!((s.kappa - (1.0 - l2r2) / (1.0 + l2r2)).abs() < 1e-9);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn constant_curvature_families(r in 0.0..0.95f64, t in 0.0..(2.0 * PI), lambda in 0.2..1.0f64) {
            let z = unit(t) * (r / lambda);
            let k = gauss_curvature(&ConformalFactor::Spherical { lambda }, z).unwrap();
            prop_assert!((k - 1.0).abs() < 1e-12);
            let k = gauss_curvature(&ConformalFactor::Hyperbolic { lambda }, z).unwrap();
            prop_assert!((k + 1.0).abs() < 1e-12);
        }
    }
}
