//! Scenario files: JSON documents describing one verification unit.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "map": { "coeffs": [[1, 0], [0.2, 0]], "offset": [0, 0] },
//!   "factor": { "family": "spherical", "lambda": 1.0 },
//!   "pole": { "domain": [0, 0] },
//!   "p_grid": [0, 0.25, 0.5, 1, 2, 5],
//!   "t_max": 8,
//!   "quad_tol": 1e-10,
//!   "checks": ["all"],
//!   "tol": 1e-9
//! }
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::DEFAULT_CHECK_TOL;
use crate::conformal::AnalyticMap;
use crate::error::{Error, Result};
use crate::greenint::{Pole, Scenario};
use crate::metric::{ConformalFactor, StantonWeight};
use crate::verify::CheckKind;

pub const SCHEMA_VERSION: u32 = 1;
pub const SCENARIO_EXTENSION: &str = "scn";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    pub offset: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant { value: f64 },
    Gaussian { alpha: f64 },
    Spherical { lambda: f64 },
    AnalyticModulus { g: MapSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorSpec {
    Flat,
    LogDeriv { g: MapSpec },
    Spherical { lambda: f64 },
    Hyperbolic { lambda: f64 },
    Stanton { weight: WeightSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PoleSpec {
    Domain([f64; 2]),
    Preimage([f64; 2]),
}

fn default_p_grid() -> Vec<f64> {
    vec![0.0, 0.25, 0.5, 1.0, 2.0, 5.0]
}

fn default_t_max() -> f64 {
    8.0
}

fn default_quad_tol() -> f64 {
    1e-10
}

fn default_tol() -> f64 {
    DEFAULT_CHECK_TOL
}

fn default_checks() -> Vec<String> {
    vec!["all".into()]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub map: MapSpec,
    #[serde(default = "flat")]
    pub factor: FactorSpec,
    pub pole: PoleSpec,
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<f64>,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn flat() -> FactorSpec {
    FactorSpec::Flat
}

fn point(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[0], v[1])
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::InvalidScenario(format!("{name} must be finite")))
    }
}

impl MapSpec {
    pub fn build(&self) -> Result<AnalyticMap> {
        AnalyticMap::new(point(self.offset), self.coeffs.iter().map(|&c| point(c)).collect())
    }
}

impl FactorSpec {
    pub fn build(&self) -> Result<ConformalFactor> {
        let factor = match self {
            FactorSpec::Flat => ConformalFactor::Flat,
            FactorSpec::LogDeriv { g } => ConformalFactor::LogDeriv { g: g.build()? },
            FactorSpec::Spherical { lambda } => ConformalFactor::Spherical { lambda: *lambda },
            FactorSpec::Hyperbolic { lambda } => ConformalFactor::Hyperbolic { lambda: *lambda },
            FactorSpec::Stanton { weight } => ConformalFactor::Stanton {
                weight: match weight {
                    WeightSpec::Constant { value } => StantonWeight::Constant { value: *value },
                    WeightSpec::Gaussian { alpha } => StantonWeight::Gaussian { alpha: *alpha },
                    WeightSpec::Spherical { lambda } => StantonWeight::Spherical { lambda: *lambda },
                    WeightSpec::AnalyticModulus { g } => StantonWeight::AnalyticModulus { g: g.build()? },
                },
            },
        };
        factor.validate()?;
        Ok(factor)
    }
}

/// A parsed scenario with its check request and tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub id: String,
    pub scenario: Scenario,
    /// Empty means every applicable check.
    pub checks: Vec<CheckKind>,
    pub tol: f64,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidScenario(format!("parse error: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidScenario(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn into_loaded(self, id: impl Into<String>) -> Result<LoadedScenario> {
        for (i, c) in self.map.coeffs.iter().enumerate() {
            finite(&format!("map.coeffs[{i}]"), c[0])?;
            finite(&format!("map.coeffs[{i}]"), c[1])?;
        }
        let pole = match self.pole {
            PoleSpec::Domain(a) => Pole::Domain(point(a)),
            PoleSpec::Preimage(b) => Pole::Preimage(point(b)),
        };
        let (Pole::Domain(z) | Pole::Preimage(z)) = pole;
        if !z.is_finite() {
            return Err(Error::InvalidScenario("pole must be finite".into()));
        }
        let tol = finite("tol", self.tol)?;
        if !(tol >= 0.0) {
            return Err(Error::InvalidScenario(format!("tol must be nonnegative, got {tol}")));
        }
        let checks = if self.checks.iter().any(|c| c == "all") {
            if self.checks.len() > 1 {
                return Err(Error::InvalidScenario(
                    "\"all\" cannot be combined with other checks".into(),
                ));
            }
            Vec::new()
        } else if self.checks.is_empty() {
            return Err(Error::InvalidScenario("checks must not be empty".into()));
        } else {
            self.checks.iter().map(|c| c.parse()).collect::<Result<Vec<_>>>()?
        };
        let scenario = Scenario {
            map: self.map.build()?,
            factor: self.factor.build()?,
            pole,
            quad_tol: finite("quad_tol", self.quad_tol)?,
            t_max: finite("t_max", self.t_max)?,
            p_grid: self.p_grid,
        };
        Ok(LoadedScenario {
            id: id.into(),
            scenario,
            checks,
            tol,
        })
    }
}

/// Reads and validates a scenario file; the id is the file stem.
pub fn load(path: &Path) -> Result<LoadedScenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidScenario(format!("cannot read {}: {e}", path.display())))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    ScenarioFile::parse(&text)
        .and_then(|f| f.into_loaded(id))
        .map_err(|e| Error::InvalidScenario(format!("{}: {e}", path.display())))
}
