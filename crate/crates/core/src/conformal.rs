//! Domains as polynomial images of the unit disk, and their Green functions.
//!
//! A domain `Ω = f(𝔻)` is given by a univalent polynomial
//! `f(w) = z₀ + Σ c_k w^k`. Every Green-function quantity pulls back to the
//! disk: with `b = f⁻¹(a)` and the disk automorphism
//! `φ_b(w) = (b - w)/(1 - b̄w)`, the map `ψ = φ_b ∘ f⁻¹` sends `Ω` onto `𝔻`
//! with `ψ(a) = 0`, so `g_Ω(z, a) = -(2π)⁻¹ ln|ψ(z)|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexPoint = Complex64;

/// Side of the polar sampling grid used for seeding and certification.
const GRID_SIDE: usize = 64;
/// Boundary samples for the injectivity certificate.
const BOUNDARY_SAMPLES: usize = 4096;

/// `f(w) = offset + Σ_{k≥1} coeffs[k-1] · w^k` on the closed unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticMap {
    offset: ComplexPoint,
    coeffs: Vec<ComplexPoint>,
}

impl AnalyticMap {
    pub fn new(offset: ComplexPoint, coeffs: Vec<ComplexPoint>) -> Result<Self> {
        if coeffs.is_empty() || coeffs[0] == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidMap("leading coefficient c₁ must be nonzero".into()));
        }
        if !offset.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMap("coefficients must be finite".into()));
        }
        Ok(AnalyticMap { offset, coeffs })
    }

    pub fn identity() -> Self {
        AnalyticMap {
            offset: Complex64::new(0.0, 0.0),
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// `w ↦ factor · w`.
    pub fn scaling(factor: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), vec![Complex64::new(factor, 0.0)])
    }

    /// Real coefficients `c₁, c₂, …` with zero offset.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(
            Complex64::new(0.0, 0.0),
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn offset(&self) -> ComplexPoint {
        self.offset
    }

    pub fn coeffs(&self) -> &[ComplexPoint] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// `f(w)` by Horner's scheme.
    pub fn eval(&self, w: ComplexPoint) -> ComplexPoint {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c;
        }
        self.offset + acc * w
    }

    /// `f′(w)` by Horner's scheme.
    pub fn deriv(&self, w: ComplexPoint) -> ComplexPoint {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * w + c * (k as f64 + 1.0);
        }
        acc
    }

    /// Polynomial composition `self ∘ inner`.
    pub fn compose(&self, inner: &AnalyticMap) -> Result<AnalyticMap> {
        // inner(w) = q(w) as a full coefficient vector including the constant term.
        let mut q = vec![inner.offset];
        q.extend_from_slice(&inner.coeffs);
        let mut result = vec![Complex64::new(0.0, 0.0)];
        // Horner in the polynomial ring: acc = acc·q + c.
        let mut outer = vec![self.offset];
        outer.extend_from_slice(&self.coeffs);
        for c in outer.iter().rev() {
            result = poly_mul(&result, &q);
            result[0] += c;
        }
        let offset = result[0];
        let mut coeffs: Vec<ComplexPoint> = result[1..].to_vec();
        while coeffs.len() > 1 && coeffs.last().map(|c| c.norm() == 0.0).unwrap_or(false) {
            coeffs.pop();
        }
        AnalyticMap::new(offset, coeffs)
    }

    /// Largest `|f(e^{iθ})|` over the boundary sample.
    pub fn outer_radius(&self) -> f64 {
        (0..BOUNDARY_SAMPLES)
            .map(|j| self.eval(unit(2.0 * PI * j as f64 / BOUNDARY_SAMPLES as f64)).norm())
            .fold(0.0, f64::max)
    }

    /// Samples `|f′|` on a 64×64 polar grid of the closed disk and tests the
    /// 4096-gon of boundary images for self-intersection.
    pub fn certify(&self) -> UnivalenceCertificate {
        let mut min_abs_derivative = f64::INFINITY;
        for i in 0..GRID_SIDE {
            let r = i as f64 / (GRID_SIDE - 1) as f64;
            for j in 0..GRID_SIDE {
                let w = unit(2.0 * PI * j as f64 / GRID_SIDE as f64) * r;
                min_abs_derivative = min_abs_derivative.min(self.deriv(w).norm());
            }
        }
        let boundary: Vec<ComplexPoint> = (0..BOUNDARY_SAMPLES)
            .map(|j| self.eval(unit(2.0 * PI * j as f64 / BOUNDARY_SAMPLES as f64)))
            .collect();
        let boundary_simple = polygon_is_simple(&boundary);
        UnivalenceCertificate {
            min_abs_derivative,
            boundary_simple,
            certified: min_abs_derivative > 0.0 && boundary_simple,
        }
    }
}

fn poly_mul(a: &[ComplexPoint], b: &[ComplexPoint]) -> Vec<ComplexPoint> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `e^{iθ}`.
pub fn unit(theta: f64) -> ComplexPoint {
    Complex64::from_polar(1.0, theta)
}

/// Sampling evidence that a map is univalent on the closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnivalenceCertificate {
    pub min_abs_derivative: f64,
    pub boundary_simple: bool,
    pub certified: bool,
}

fn orient(a: ComplexPoint, b: ComplexPoint, c: ComplexPoint) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_cross(p1: ComplexPoint, p2: ComplexPoint, q1: ComplexPoint, q2: ComplexPoint) -> bool {
    if p1.re.max(p2.re) < q1.re.min(q2.re)
        || q1.re.max(q2.re) < p1.re.min(p2.re)
        || p1.im.max(p2.im) < q1.im.min(q2.im)
        || q1.im.max(q2.im) < p1.im.min(p2.im)
    {
        return false;
    }
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

/// Closed polygon without repeated vertices or crossings between
/// non-adjacent edges.
fn polygon_is_simple(pts: &[ComplexPoint]) -> bool {
    let n = pts.len();
    for i in 0..n {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        if a == b {
            return false;
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_cross(a, b, pts[j], pts[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

/// The disk automorphism `φ_w(z) = (w - z)/(1 - w̄z)`.
pub fn mobius(w: ComplexPoint, z: ComplexPoint) -> Result<ComplexPoint> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "mobius center must lie in the open disk, |w| = {}",
            w.norm()
        )));
    }
    Ok(mobius_unchecked(w, z))
}

#[inline]
pub(crate) fn mobius_unchecked(w: ComplexPoint, z: ComplexPoint) -> ComplexPoint {
    (w - z) / (1.0 - w.conj() * z)
}

/// `φ_w′(z) = (|w|² - 1)/(1 - w̄z)²`.
#[inline]
pub fn mobius_deriv(w: ComplexPoint, z: ComplexPoint) -> ComplexPoint {
    let d = 1.0 - w.conj() * z;
    (w.norm_sqr() - 1.0) / (d * d)
}

pub fn map_eval(f: &AnalyticMap, w: ComplexPoint) -> ComplexPoint {
    f.eval(w)
}

pub fn map_deriv(f: &AnalyticMap, w: ComplexPoint) -> ComplexPoint {
    f.deriv(w)
}

/// Boundary slack allowed for preimages.
const DISK_SLACK: f64 = 1e-9;

/// Solves `f(w) = z` for `w` in the closed disk.
///
/// Seeds at the best of a 64×64 polar grid (ties go to the smaller `|w|`),
/// then runs Newton's method with step halving whenever the residual fails
/// to decrease. Succeeds when `|f(w) - z| ≤ tol·(1 + |z|)` and
/// `|w| ≤ 1 + 1e-9`.
pub fn map_invert(f: &AnalyticMap, z: ComplexPoint, tol: f64) -> Result<ComplexPoint> {
    let fail = |reason: String| Error::Inversion {
        re: z.re,
        im: z.im,
        reason,
    };
    if !z.is_finite() {
        return Err(fail("non-finite target".into()));
    }
    // Affine maps invert in closed form.
    if f.degree() == 1 {
        let w = (z - f.offset) / f.coeffs[0];
        if w.norm() > 1.0 + DISK_SLACK {
            return Err(fail(format!("preimage |w| = {} lies outside the disk", w.norm())));
        }
        return Ok(w);
    }
    let target = tol * (1.0 + z.norm());
    let mut seed = Complex64::new(0.0, 0.0);
    let mut best = (f.eval(seed) - z).norm();
    for i in 1..GRID_SIDE {
        let r = i as f64 / (GRID_SIDE - 1) as f64;
        for j in 0..GRID_SIDE {
            let w = unit(2.0 * PI * j as f64 / GRID_SIDE as f64) * r;
            let res = (f.eval(w) - z).norm();
            if res < best {
                best = res;
                seed = w;
            }
        }
    }
    let mut w = seed;
    let mut residual = best;
    for _ in 0..200 {
        if residual <= target {
            break;
        }
        let d = f.deriv(w);
        if d.norm() == 0.0 {
            return Err(fail("vanishing derivative during Newton iteration".into()));
        }
        let step = (f.eval(w) - z) / d;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial = w - step * scale;
            let r = (f.eval(trial) - z).norm();
            if r < residual {
                w = trial;
                residual = r;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if residual > target {
        return Err(fail(format!("residual {residual:e} above tolerance {target:e}")));
    }
    if w.norm() > 1.0 + DISK_SLACK {
        return Err(fail(format!("preimage |w| = {} lies outside the disk", w.norm())));
    }
    Ok(w)
}

/// Default tolerance for internal map inversions.
pub const INVERT_TOL: f64 = 1e-14;

/// Green function of the disk `D(b, R)`:
/// `(2π)⁻¹ ln |(R² - conj(z1-b)(z2-b)) / (R(z1-z2))|`.
pub fn green_disk(z1: ComplexPoint, z2: ComplexPoint, b: ComplexPoint, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("disk radius must be positive, got {radius}")));
    }
    for z in [z1, z2] {
        if (z - b).norm() >= radius {
            return Err(Error::Domain(format!(
                "point {} + {}i is outside the disk D({} + {}i, {radius})",
                z.re, z.im, b.re, b.im
            )));
        }
    }
    if z1 == z2 {
        return Err(Error::Pole { re: z1.re, im: z1.im });
    }
    let num = radius * radius - (z1 - b).conj() * (z2 - b);
    let den = (z1 - z2) * radius;
    Ok((num.norm() / den.norm()).ln() / (2.0 * PI))
}

/// `g_Ω(z, a) = -(2π)⁻¹ ln|φ_b(f⁻¹(z))|` with `b = f⁻¹(a)`.
pub fn green_domain(f: &AnalyticMap, z: ComplexPoint, a: ComplexPoint) -> Result<f64> {
    let b = map_invert(f, a, INVERT_TOL)?;
    let w = map_invert(f, z, INVERT_TOL)?;
    green_from_preimages(w, b, z)
}

fn green_from_preimages(w: ComplexPoint, b: ComplexPoint, z: ComplexPoint) -> Result<f64> {
    if b.norm() >= 1.0 {
        return Err(Error::Domain("pole must be interior".into()));
    }
    let psi = mobius_unchecked(b, w).norm();
    if psi == 0.0 {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    Ok((-psi.ln() / (2.0 * PI)).max(0.0))
}

/// Inner normal derivative of `g_Ω(·, a)` at the boundary point `f(e^{iθ})`:
/// `(2π)⁻¹ |φ_b′(e^{iθ})| / |f′(e^{iθ})|`.
pub fn green_normal_boundary(f: &AnalyticMap, theta: f64, a: ComplexPoint) -> Result<f64> {
    let b = map_invert(f, a, INVERT_TOL)?;
    green_normal_boundary_preimage(f, theta, b)
}

/// As [`green_normal_boundary`] with the pole given by its disk preimage.
pub fn green_normal_boundary_preimage(f: &AnalyticMap, theta: f64, b: ComplexPoint) -> Result<f64> {
    if !(b.norm() < 1.0 - DISK_SLACK) {
        return Err(Error::Domain(format!(
            "pole preimage must be interior, |b| = {}",
            b.norm()
        )));
    }
    let w = unit(theta);
    let df = f.deriv(w).norm();
    if !(df > f64::MIN_POSITIVE) {
        return Err(Error::Domain(format!("|f′| underflows at θ = {theta}")));
    }
    Ok(mobius_deriv(b, w).norm() / df / (2.0 * PI))
}

/// Conformal radius `R_Ω(a)` and Robin mass `H_Ω(a, a) = -ln R_Ω(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalRadiusResult {
    pub radius: f64,
    pub robin_mass: f64,
}

/// `R_Ω(a) = (1 - |b|²)|f′(b)|` with `b = f⁻¹(a)`.
pub fn conformal_radius(f: &AnalyticMap, a: ComplexPoint) -> Result<ConformalRadiusResult> {
    let b = map_invert(f, a, INVERT_TOL)?;
    conformal_radius_preimage(f, b)
}

pub fn conformal_radius_preimage(f: &AnalyticMap, b: ComplexPoint) -> Result<ConformalRadiusResult> {
    if !(b.norm() < 1.0) {
        return Err(Error::Domain("pole must be interior".into()));
    }
    let radius = (1.0 - b.norm_sqr()) * f.deriv(b).norm();
    Ok(ConformalRadiusResult {
        radius,
        robin_mass: -radius.ln(),
    })
}
