//! Green-function moments on simply connected planar domains with
//! conformal metrics.
//!
//! A domain is a univalent polynomial image `f(𝔻)` of the unit disk
//! ([`conformal`]), carrying a metric `e^{2u}|dz|²` ([`metric`]). The level
//! sets of its Green function give a decreasing area profile `X(t)`
//! ([`greenint`]) whose gamma-normalized moments are nonincreasing in the
//! exponent ([`stieltjes`]). [`verify`] turns the resulting inequalities into
//! named checks and [`cli`] runs them from scenario files ([`scenario`]).
//!
//! ```
//! use greenmono::{AnalyticMap, ConformalFactor, GreenModel, Pole, Scenario};
//! use num_complex::Complex64;
//!
//! let s = Scenario::new(AnalyticMap::identity(), ConformalFactor::Flat, Pole::Domain(Complex64::new(0.0, 0.0)));
//! let m = GreenModel::new(s).unwrap();
//! let (f, _) = m.f_functional(2.0).unwrap();
//! assert!((f - std::f64::consts::PI).abs() < 1e-8);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod cli;
pub mod conformal;
pub mod error;
pub mod greenint;
pub mod metric;
pub mod quadrature;
pub mod scenario;
pub mod special;
pub mod stieltjes;
pub mod verify;

pub use check::CheckResult;
pub use conformal::{AnalyticMap, ComplexPoint, ConformalRadiusResult};
pub use error::{Error, Result};
pub use greenint::{GreenModel, Pole, Scenario};
pub use metric::{ConformalFactor, CurvatureSummary, StantonWeight};
pub use stieltjes::{MonotoneProfile, PowerMoment};
