use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use greenmono::cli::{Report, SuiteReport};

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn shipped(name: &str) -> PathBuf {
    manifest().join("scenarios").join(format!("{name}.scn"))
}

fn fixture(name: &str) -> PathBuf {
    manifest().join("tests/fixtures").join(format!("{name}.scn"))
}

fn greenmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greenmono"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn suite_dir(names: &[PathBuf]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for n in names {
        fs::copy(n, dir.path().join(n.file_name().unwrap())).unwrap();
    }
    dir
}

#[test]
fn disk_run_passes_and_flags_equality() {
    let out = greenmono(&["run", path_str(&shipped("disk_flat"))]);
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.pass && r.certified);
    assert_eq!(r.kappa, 1.0);
    assert!(r.failures.is_empty());
    let huber = r.checks.iter().find(|c| c.name == "huber").unwrap();
    assert!(huber.equality);
    assert!(r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("monotonicity"))
        .all(|c| c.equality));
    assert!(r.curve.iter().all(|c| (c.f_p - std::f64::consts::PI).abs() < 1e-8));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS disk_flat"));
}

#[test]
fn cap_reports_curvature_defect() {
    let out = greenmono(&["run", path_str(&shipped("cap_spherical"))]);
    assert_eq!(out.status.code(), Some(0));
    let r: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r.kappa - 0.6).abs() < 1e-9);
    assert!(!r.checks.iter().find(|c| c.name == "huber").unwrap().equality);
}

#[test]
fn overcurved_domain_is_an_error() {
    let out = greenmono(&["run", path_str(&fixture("overcurved"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("κ(Ω) > 0 required"));
    assert!(out.stdout.is_empty());
}

#[test]
fn non_univalent_map_fails_suite() {
    let dir = suite_dir(&[
        shipped("disk_flat"),
        shipped("quadratic_flat"),
        fixture("loop_quadratic"),
    ]);
    let out = greenmono(&["suite", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let s: SuiteReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!s.pass);
    let failing: Vec<_> = s.reports.iter().filter(|r| !r.pass).collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0].scenario, "loop_quadratic");
    assert_eq!(failing[0].failures, vec!["univalence".to_string()]);
    assert!(!failing[0].certified);
}

#[test]
fn empty_suite_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = greenmono(&["suite", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn keep_going_collects_errors() {
    let dir = suite_dir(&[shipped("disk_flat"), fixture("overcurved")]);
    fs::write(dir.path().join("broken.scn"), "{ not json").unwrap();

    let stop = greenmono(&["suite", path_str(dir.path())]);
    assert_eq!(stop.status.code(), Some(1));
    assert!(stop.stdout.is_empty());

    let go = greenmono(&["suite", path_str(dir.path()), "--keep-going"]);
    assert_eq!(go.status.code(), Some(1));
    let s: SuiteReport = serde_json::from_slice(&go.stdout).unwrap();
    assert_eq!(s.reports.len(), 1);
    let ids: Vec<_> = s.errors.iter().map(|e| e.scenario.as_str()).collect();
    assert_eq!(ids, ["broken", "overcurved"]);
}

#[test]
fn csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("curve.csv");
    let out = greenmono(&[
        "run",
        path_str(&shipped("quadratic_flat")),
        "--format",
        "csv",
        "--p-grid",
        "0,1,3",
        "--out",
        path_str(&target),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&target).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["p", "F_p", "error_estimate"]);
    let values: Vec<(f64, f64)> = rows
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap())
        })
        .collect();
    assert_eq!(values.iter().map(|v| v.0).collect::<Vec<_>>(), [0.0, 1.0, 3.0]);
    // Oracle: F(p) = π + 0.08π 2^{-p}.
    for (p, f) in values {
        let exact = std::f64::consts::PI * (1.0 + 0.08 * 2f64.powf(-p));
        assert!((f - exact).abs() < 1e-8, "p = {p}: {f} vs {exact}");
    }
}

#[test]
fn suite_csv_has_scenario_column() {
    let dir = suite_dir(&[shipped("disk_flat"), shipped("scaled_disk")]);
    let out = greenmono(&["suite", path_str(dir.path()), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scenario,p,F_p,error_estimate\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("scaled_disk,")).count(), 6);
}

#[test]
fn parallel_suite_is_byte_identical() {
    let dir = suite_dir(&[
        shipped("disk_flat_offcenter"),
        shipped("cap_spherical_offcenter"),
        shipped("logderiv_quadratic"),
        shipped("rotated_quadratic"),
    ]);
    let seq = greenmono(&["suite", path_str(dir.path())]);
    let par = greenmono(&["suite", path_str(dir.path()), "--parallel", "3"]);
    assert_eq!(seq.status.code(), Some(0));
    assert_eq!(seq.stdout, par.stdout);
}

#[test]
fn timing_is_opt_in() {
    let plain = greenmono(&["run", path_str(&shipped("disk_flat"))]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains("timing_ms"));
    let timed = greenmono(&["run", path_str(&shipped("disk_flat")), "--timing"]);
    let r: Report = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(r.timing_ms.unwrap() >= 0.0);
}

#[test]
fn bad_arguments_exit_one() {
    assert_eq!(greenmono(&["run"]).status.code(), Some(1));
    assert_eq!(greenmono(&["frobnicate"]).status.code(), Some(1));
    let out = greenmono(&["run", path_str(&shipped("disk_flat")), "--p-grid", "1,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(greenmono(&["--help"]).status.code(), Some(0));
}
