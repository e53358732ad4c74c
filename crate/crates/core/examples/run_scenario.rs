//! Loads a scenario file and prints its JSON report and CSV curve, as the
//! `greenmono run` command does. Defaults to the shipped off-center disk.
//!
//! ```text
//! cargo run --example run_scenario -- scenarios/quadratic_flat.scn
//! ```

use std::path::PathBuf;

use greenmono::cli::{render_report, run_scenario, Format, RunOptions};

fn main() -> greenmono::Result<()> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/disk_flat_offcenter.scn"));
    let opts = RunOptions {
        p_grid: Some(vec![0.0, 1.0, 2.0, 8.0]),
        ..RunOptions::default()
    };
    let report = run_scenario(&path, &opts)?;
    print!("{}", render_report(&report, Format::Json)?);
    print!("{}", render_report(&report, Format::Csv)?);
    println!("pass = {}, exit code = {}", report.pass, report.exit_code());
    Ok(())
}
