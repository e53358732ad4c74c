//! Scenario and suite runners behind the `greenmono` binary.
//!
//! Exit codes: 0 when every gating check passes, 2 when a check fails or a
//! map is not certified univalent, 1 on parse, validation or numerical
//! errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::CheckResult;
use crate::conformal::UnivalenceCertificate;
use crate::error::{Error, Result};
use crate::greenint::GreenModel;
use crate::metric::CurvatureSummary;
use crate::scenario::{self, LoadedScenario, SCENARIO_EXTENSION, SCHEMA_VERSION};
use crate::verify::{f_curve, resolve_checks, run_checks};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    #[serde(rename = "F_p")]
    pub f_p: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub scenario: String,
    pub certified: bool,
    pub univalence: UnivalenceCertificate,
    pub pole: [f64; 2],
    pub pole_preimage: [f64; 2],
    pub kappa: f64,
    pub summary: CurvatureSummary,
    pub conformal_radius: f64,
    pub boundary_functional: f64,
    pub checks: Vec<CheckResult>,
    pub curve: Vec<CurvePoint>,
    /// Names of failing gating checks, plus `univalence` when uncertified.
    pub failures: Vec<String>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioError {
    pub scenario: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub reports: Vec<Report>,
    pub errors: Vec<ScenarioError>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if !self.errors.is_empty() {
            EXIT_ERROR
        } else if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Overrides applied on top of each scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub tol: Option<f64>,
    pub quad_tol: Option<f64>,
    pub p_grid: Option<Vec<f64>>,
    pub timing: bool,
}

impl RunOptions {
    fn apply(&self, mut l: LoadedScenario) -> LoadedScenario {
        if let Some(t) = self.tol {
            l.tol = t;
        }
        if let Some(q) = self.quad_tol {
            l.scenario.quad_tol = q;
        }
        if let Some(g) = &self.p_grid {
            l.scenario.p_grid = g.clone();
        }
        l
    }
}

/// Runs an already loaded scenario.
pub fn evaluate(loaded: LoadedScenario, opts: &RunOptions) -> Result<Report> {
    let start = Instant::now();
    let loaded = opts.apply(loaded);
    let kinds = resolve_checks(&loaded.checks, &loaded.scenario.factor)?;
    let univalence = loaded.scenario.map.certify();
    let model = GreenModel::new(loaded.scenario)?;
    let checks = run_checks(&model, &kinds, loaded.tol)?;
    let curve = if model.kappa() > 0.0 {
        f_curve(&model, &model.scenario().p_grid)?
            .into_iter()
            .map(|(p, f_p, error_estimate)| CurvePoint { p, f_p, error_estimate })
            .collect()
    } else {
        Vec::new()
    };
    let (radius, _) = model.conformal_radius()?;
    let mut failures: Vec<String> = checks.iter().filter(|c| c.gates()).map(|c| c.name.clone()).collect();
    if !univalence.certified {
        failures.insert(0, "univalence".into());
    }
    let a = model.pole();
    let b = model.pole_preimage();
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        scenario: loaded.id,
        certified: univalence.certified,
        univalence,
        pole: [a.re, a.im],
        pole_preimage: [b.re, b.im],
        kappa: model.kappa(),
        summary: *model.summary(),
        conformal_radius: radius,
        boundary_functional: model.boundary_functional(),
        checks,
        curve,
        pass: failures.is_empty(),
        failures,
        timing_ms: opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

pub fn run_scenario(path: &Path, opts: &RunOptions) -> Result<Report> {
    evaluate(scenario::load(path)?, opts)
}

/// Scenario files in `dir`, sorted by file name.
pub fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| Error::InvalidScenario(format!("cannot read directory {}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == SCENARIO_EXTENSION))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    if files.is_empty() {
        return Err(Error::InvalidScenario(format!(
            "no .{SCENARIO_EXTENSION} files in {}",
            dir.display()
        )));
    }
    Ok(files)
}

/// Runs every scenario in `dir`. With `parallel = Some(n)` scenarios run on
/// an `n`-thread pool; the report is identical either way. Without
/// `keep_going` the first error aborts the suite.
pub fn run_suite(dir: &Path, opts: &RunOptions, parallel: Option<usize>, keep_going: bool) -> Result<SuiteReport> {
    let files = scenario_files(dir)?;
    let outcomes: Vec<(String, Result<Report>)> = match parallel {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidScenario(format!("thread pool: {e}")))?;
            pool.install(|| files.par_iter().map(|f| (stem(f), run_scenario(f, opts))).collect())
        }
        None => {
            let mut out = Vec::new();
            for f in &files {
                let r = run_scenario(f, opts);
                let stop = r.is_err() && !keep_going;
                out.push((stem(f), r));
                if stop {
                    break;
                }
            }
            out
        }
    };
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (id, r) in outcomes {
        match r {
            Ok(rep) => reports.push(rep),
            Err(e) => {
                if !keep_going {
                    return Err(e);
                }
                errors.push(ScenarioError {
                    scenario: id,
                    message: e.to_string(),
                })
            }
        }
    }
    let pass = errors.is_empty() && reports.iter().all(|r| r.pass);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        reports,
        errors,
        pass,
    })
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct CommonFlags {
    /// Base tolerance for pass/fail decisions.
    #[arg(long)]
    tol: Option<f64>,
    /// Quadrature tolerance.
    #[arg(long = "quad-tol")]
    quad_tol: Option<f64>,
    /// Comma-separated exponents, e.g. `0,0.5,1,2`.
    #[arg(long = "p-grid", value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
}

impl CommonFlags {
    fn options(&self) -> RunOptions {
        RunOptions {
            tol: self.tol,
            quad_tol: self.quad_tol,
            p_grid: self.p_grid.clone(),
            timing: self.timing,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        path: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run every scenario file in a directory.
    Suite {
        dir: PathBuf,
        #[command(flatten)]
        flags: CommonFlags,
        /// Run scenarios on N threads.
        #[arg(long)]
        parallel: Option<usize>,
        /// Continue past scenario errors.
        #[arg(long = "keep-going")]
        keep_going: bool,
    },
}

#[derive(Debug, Parser)]
#[command(
    name = "greenmono",
    version,
    about = "Green-function moment inequalities on conformal disks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn curve_csv(rows: &[(Option<&str>, &CurvePoint)]) -> Result<String> {
    let with_id = rows.iter().any(|(id, _)| id.is_some());
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidScenario(format!("csv: {e}"));
    if with_id {
        w.write_record(["scenario", "p", "F_p", "error_estimate"]).map_err(io)?;
    } else {
        w.write_record(["p", "F_p", "error_estimate"]).map_err(io)?;
    }
    for (id, c) in rows {
        let nums = [c.p.to_string(), c.f_p.to_string(), c.error_estimate.to_string()];
        match id {
            Some(id) => w
                .write_record(std::iter::once(id.to_string()).chain(nums))
                .map_err(io)?,
            None => w.write_record(nums).map_err(io)?,
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidScenario(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_report(r: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(r).expect("report serializes") + "\n"),
        Format::Csv => curve_csv(&r.curve.iter().map(|c| (None, c)).collect::<Vec<_>>()),
    }
}

pub fn render_suite(s: &SuiteReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(s).expect("report serializes") + "\n"),
        Format::Csv => curve_csv(
            &s.reports
                .iter()
                .flat_map(|r| r.curve.iter().map(move |c| (Some(r.scenario.as_str()), c)))
                .collect::<Vec<_>>(),
        ),
    }
}

fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::InvalidScenario(format!("cannot write {}: {e}", p.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidScenario(format!("stdout: {e}"))),
    }
}

fn summarize(r: &Report, stderr: &mut dyn Write) {
    let status = if r.pass { "PASS" } else { "FAIL" };
    let _ = writeln!(
        stderr,
        "{status} {} (κ = {}, {} checks)",
        r.scenario,
        r.kappa,
        r.checks.len()
    );
    for f in &r.failures {
        let _ = writeln!(stderr, "  failed: {f}");
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run { path, flags } => run_scenario(path, &flags.options()).and_then(|r| {
            summarize(&r, stderr);
            emit(&render_report(&r, flags.format)?, flags.out.as_deref(), stdout)?;
            Ok(r.exit_code())
        }),
        Command::Suite {
            dir,
            flags,
            parallel,
            keep_going,
        } => run_suite(dir, &flags.options(), *parallel, *keep_going).and_then(|s| {
            for r in &s.reports {
                summarize(r, stderr);
            }
            for e in &s.errors {
                let _ = writeln!(stderr, "ERROR {}: {}", e.scenario, e.message);
            }
            emit(&render_suite(&s, flags.format)?, flags.out.as_deref(), stdout)?;
            Ok(s.exit_code())
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}
