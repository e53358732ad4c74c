//! Every applicable check on an off-center spherical cap, printed as a table.
//!
//! ```text
//! cargo run --example inequality_checks
//! ```

use greenmono::verify::{resolve_checks, run_checks};
use greenmono::{AnalyticMap, ComplexPoint, ConformalFactor, GreenModel, Pole, Scenario};

fn main() -> greenmono::Result<()> {
    let scenario = Scenario::new(
        AnalyticMap::scaling(0.5)?,
        ConformalFactor::Spherical { lambda: 1.0 },
        Pole::Preimage(ComplexPoint::new(0.4, 0.0)),
    );
    let m = GreenModel::new(scenario)?;
    let kinds = resolve_checks(&[], &m.scenario().factor)?;
    let checks = run_checks(&m, &kinds, 1e-9)?;
    println!("{:<34} {:>16} {:>16} {:>12}  status", "check", "lhs", "rhs", "margin");
    for c in &checks {
        let status = match (c.pass, c.conjectural, c.equality) {
            (_, _, true) => "equality",
            (true, true, _) => "ok (conjectural)",
            (true, false, _) => "ok",
            (false, true, _) => "miss (conjectural)",
            (false, false, _) => "FAIL",
        };
        println!(
            "{:<34} {:>16.10} {:>16.10} {:>12.3e}  {status}",
            c.name, c.lhs, c.rhs, c.margin
        );
    }
    let failing = checks.iter().filter(|c| c.gates()).count();
    println!("{} checks, {failing} failing", checks.len());
    Ok(())
}
