//! Gamma function values and normalized moments of a monotone profile.
//!
//! ```text
//! cargo run --example gamma_and_moments
//! ```

use greenmono::special::{gamma_real, ln_gamma};
use greenmono::stieltjes::{moment, normalize, uniform_grid, MonotoneProfile};

fn main() -> greenmono::Result<()> {
    println!("{:>8}  {:>22}  {:>18}", "x", "gamma(x)", "ln gamma(x)");
    for x in [0.5, 1.0, 2.5, 10.0, 50.5, 150.0] {
        println!("{x:>8}  {:>22.15e}  {:>18.12}", gamma_real(x)?, ln_gamma(x)?);
    }

    // X(t) = e^{-t} / (1 + t) with decay budget c = 1.
    let profile = MonotoneProfile::new(|t| (-t).exp() / (1.0 + t), 1.0, uniform_grid(80.0, 800))?;
    println!();
    println!("{:>6}  {:>14}  {:>10}", "p", "N(p)", "error");
    for p in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let m = moment(&profile, p, 1e-12)?;
        let (n, err) = normalize(&m, profile.c())?;
        println!("{p:>6}  {n:>14.10}  {err:>10.2e}");
    }
    Ok(())
}
