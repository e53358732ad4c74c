//! Fixed-rule numerical integration.
//!
//! Two primitives cover every integral in the crate: an adaptive 21-point
//! Gauss–Kronrod integrator for finite intervals and an adaptive periodic
//! trapezoid rule for angular means. Both are deterministic: the sequence of
//! function evaluations depends only on the inputs, so results are
//! bit-identical across runs and threads.

use std::f64::consts::PI;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Outcome of a numerical integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            max_segments: 4000,
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One application of the 21-point Kronrod rule with its embedded 10-point
/// Gauss rule. Returns `(kronrod, |kronrod - gauss|)`.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = half * XGK[j];
        let sum = f(center - x) + f(center + x);
        kronrod += WGK[j] * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    // Rounding floor: the rule cannot resolve below a few ulps of the value.
    let floor = 50.0 * f64::EPSILON * value.abs();
    (value, error.max(floor))
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// The segment with the largest error estimate is bisected until the summed
/// error meets `max(tol.abs, tol.rel * |value|)` or the segment budget runs
/// out, in which case `converged` is false.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let (value, error) = gauss_kronrod_21(&f, a, b);
    let mut segments = vec![Segment { a, b, value, error }];
    let mut evaluations = 21;
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() || !err.is_finite() {
            return QuadResult {
                value: total,
                error: f64::INFINITY,
                evaluations,
                converged: false,
            };
        }
        if err <= tol.target(total) {
            return QuadResult {
                value: total,
                error: err,
                evaluations,
                converged: true,
            };
        }
        if segments.len() >= tol.max_segments {
            return QuadResult {
                value: total,
                error: err,
                evaluations,
                converged: false,
            };
        }
        // First index wins ties, keeping the refinement order deterministic.
        let mut worst = 0;
        for (i, s) in segments.iter().enumerate() {
            if s.error > segments[worst].error {
                worst = i;
            }
        }
        let s = segments[worst];
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // Interval exhausted at machine resolution.
            return QuadResult {
                value: total,
                error: err,
                evaluations,
                converged: false,
            };
        }
        let (lv, le) = gauss_kronrod_21(&f, s.a, mid);
        let (rv, re) = gauss_kronrod_21(&f, mid, s.b);
        evaluations += 42;
        segments[worst] = Segment {
            a: s.a,
            b: mid,
            value: lv,
            error: le,
        };
        segments.push(Segment {
            a: mid,
            b: s.b,
            value: rv,
            error: re,
        });
    }
}

/// Mean value of a `2π`-periodic function, `(2π)⁻¹ ∫₀^{2π} f(θ) dθ`.
///
/// Uses the trapezoid rule, doubling the node count from `start_nodes` until
/// two successive estimates agree to `rel_tol` (or to `1e-300` absolutely).
/// For analytic periodic integrands the rule converges geometrically, so the
/// last difference overestimates the error of the finer estimate.
pub fn periodic_mean<F: Fn(f64) -> f64>(f: F, rel_tol: f64, start_nodes: usize) -> QuadResult {
    const MAX_NODES: usize = 1 << 16;
    let mut n = start_nodes.max(4);
    let mut sum: f64 = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).sum();
    let mut mean = sum / n as f64;
    let mut evaluations = n;
    loop {
        // Midpoints of the current mesh.
        let h = 2.0 * PI / n as f64;
        let extra: f64 = (0..n).map(|j| f(h * (j as f64 + 0.5))).sum();
        evaluations += n;
        sum += extra;
        n *= 2;
        let refined = sum / n as f64;
        let diff = (refined - mean).abs();
        mean = refined;
        if diff <= rel_tol * mean.abs() || diff <= 1e-300 {
            return QuadResult {
                value: mean,
                error: diff,
                evaluations,
                converged: true,
            };
        }
        if n >= MAX_NODES || !mean.is_finite() {
            return QuadResult {
                value: mean,
                error: diff,
                evaluations,
                converged: false,
            };
        }
    }
}
