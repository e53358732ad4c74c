//! Gaussian curvature, total positive curvature and the defect `κ` for
//! several conformal metrics on the same domain.
//!
//! ```text
//! cargo run --example curvature_defect
//! ```

use greenmono::metric::{curvature_summary, gauss_curvature};
use greenmono::{AnalyticMap, ComplexPoint, ConformalFactor, StantonWeight};

fn main() -> greenmono::Result<()> {
    let cap = AnalyticMap::scaling(0.5)?;
    let factors = [
        ("flat", ConformalFactor::Flat),
        ("spherical(1)", ConformalFactor::Spherical { lambda: 1.0 }),
        ("hyperbolic(0.9)", ConformalFactor::Hyperbolic { lambda: 0.9 }),
        (
            "stanton gaussian(0.5)",
            ConformalFactor::Stanton {
                weight: StantonWeight::Gaussian { alpha: 0.5 },
            },
        ),
    ];
    let probe = ComplexPoint::new(0.2, -0.1);
    println!("domain: disk of radius 1/2");
    println!(
        "{:<22} {:>10} {:>12} {:>12} {:>12} {:>12}",
        "metric", "K(probe)", "int K+", "kappa", "area", "length"
    );
    for (name, u) in &factors {
        let s = curvature_summary(&cap, u, 1e-10)?;
        println!(
            "{name:<22} {:>10.6} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
            gauss_curvature(u, probe)?,
            s.total_k_plus,
            s.kappa,
            s.area_sigma,
            s.length_sigma
        );
    }
    println!("closed form for the spherical cap: kappa = 3/5, area = 4pi/5, length = 8pi/5");
    Ok(())
}
