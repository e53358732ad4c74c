//! Green function, boundary normal derivative and conformal radius of a
//! polynomial image of the disk.
//!
//! ```text
//! cargo run --example disk_green_function
//! ```

use std::f64::consts::PI;

use greenmono::conformal::{conformal_radius, green_domain, green_normal_boundary, map_invert, INVERT_TOL};
use greenmono::{AnalyticMap, ComplexPoint};

fn main() -> greenmono::Result<()> {
    let f = AnalyticMap::new(
        ComplexPoint::new(0.0, 0.0),
        vec![ComplexPoint::new(1.0, 0.0), ComplexPoint::new(0.2, 0.0)],
    )?;
    let cert = f.certify();
    println!(
        "f(w) = w + 0.2 w^2, univalent: {}, min |f'| = {:.4}",
        cert.certified, cert.min_abs_derivative
    );

    let a = ComplexPoint::new(0.1, 0.05);
    let b = map_invert(&f, a, INVERT_TOL)?;
    println!("pole a = {a}, preimage b = {b:.12}");

    for z in [
        ComplexPoint::new(0.5, 0.0),
        ComplexPoint::new(-0.3, 0.4),
        ComplexPoint::new(0.0, -0.9),
    ] {
        println!("  g({z}, a) = {:.10}", green_domain(&f, z, a)?);
    }

    let n = 8;
    println!("boundary normal derivative:");
    for k in 0..n {
        let theta = 2.0 * PI * k as f64 / n as f64;
        println!(
            "  theta = {theta:.3}  dg/dn = {:.10}",
            green_normal_boundary(&f, theta, a)?
        );
    }

    let r = conformal_radius(&f, a)?;
    println!(
        "conformal radius R = {:.12}, Robin mass = {:.12}",
        r.radius, r.robin_mass
    );
    Ok(())
}
