//! Normalized moments for exponents in `(-1, 0)`: the proven lower bound at
//! `p = -1/2` and the approach to the boundary value as `p → -1`.
//!
//! ```text
//! cargo run --example negative_exponents
//! ```

use greenmono::verify::{check_negative_p, NEGATIVE_P};
use greenmono::{AnalyticMap, ComplexPoint, ConformalFactor, GreenModel, Pole, Scenario};

fn main() -> greenmono::Result<()> {
    let origin = Pole::Domain(ComplexPoint::new(0.0, 0.0));
    let quadratic = AnalyticMap::new(
        ComplexPoint::new(0.0, 0.0),
        vec![ComplexPoint::new(1.0, 0.0), ComplexPoint::new(0.2, 0.0)],
    )?;
    let cases = [
        (
            "disk",
            Scenario::new(AnalyticMap::identity(), ConformalFactor::Flat, origin),
        ),
        ("quadratic", Scenario::new(quadratic, ConformalFactor::Flat, origin)),
        (
            "cap",
            Scenario::new(
                AnalyticMap::scaling(0.5)?,
                ConformalFactor::Spherical { lambda: 1.0 },
                origin,
            ),
        ),
    ];
    for (name, s) in cases {
        let m = GreenModel::new(s)?;
        let limit = m.boundary_functional() / m.decay();
        println!("{name}: X0(0)/(4 pi kappa) = {limit:.10}");
        for p in [-0.25, -0.5, -0.75, -0.9, -0.99] {
            let (f, err) = m.f_functional(p)?;
            println!("  F({p:>5}) = {f:.10} (error {err:.1e})");
        }
        for c in check_negative_p(&m, NEGATIVE_P, 1e-9)? {
            let tag = if c.conjectural { " [conjectural]" } else { "" };
            println!("  {:<30} margin {:>12.4e} pass {}{tag}", c.name, c.margin, c.pass);
        }
    }
    Ok(())
}
