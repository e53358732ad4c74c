//! The level profile `X(t)` of the Green function, its derivative `X₀(t)`
//! and the weighted profile `e^{4πκt} X(t)` that tends to the limit value.
//!
//! ```text
//! cargo run --example level_profile
//! ```

use std::f64::consts::PI;

use greenmono::greenint::sublevel_area;
use greenmono::{AnalyticMap, ComplexPoint, ConformalFactor, GreenModel, Pole, Scenario};

fn main() -> greenmono::Result<()> {
    let map = AnalyticMap::new(
        ComplexPoint::new(0.0, 0.0),
        vec![ComplexPoint::new(1.0, 0.0), ComplexPoint::new(0.2, 0.0)],
    )?;
    let scenario = Scenario::new(map, ConformalFactor::Flat, Pole::Domain(ComplexPoint::new(0.0, 0.0)));
    let m = GreenModel::new(scenario.clone())?;
    let c = m.decay();
    println!("kappa = {}, limit value = {:.10}", m.kappa(), m.limit_value()?);
    println!(
        "{:>6} {:>16} {:>16} {:>16} {:>16}",
        "t", "X(t)", "closed form", "X0(t)", "e^{ct} X(t)"
    );
    for t in [0.0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0] {
        let rho2 = (-4.0 * PI * t).exp();
        let exact = PI * (rho2 + 0.08 * rho2 * rho2);
        let x = m.x(t);
        println!(
            "{t:>6} {x:>16.10e} {exact:>16.10e} {:>16.10e} {:>16.12}",
            m.x0(t),
            (c * t).exp() * x
        );
    }
    println!(
        "direct sublevel area at t = 0.1: {:.10e}",
        sublevel_area(&scenario, 0.1)?
    );
    Ok(())
}
