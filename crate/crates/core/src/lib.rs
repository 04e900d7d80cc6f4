//! Thermal entanglement and measurement-induced dynamics of the transverse-field
//! XY spin chain.
//!
//! The analytic side works in the thermodynamic limit through momentum
//! integrals over `[0, π]`; [`oracle`] diagonalizes small periodic chains by
//! brute force to check it. [`runner`] drives both from the `xywave` binary.

// `!(x <= tol)` is used deliberately so NaN fails validation checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod oracle;
pub mod runner;
pub mod thermal;
pub mod zero_temp;

pub use analytic::{ModelParams, Quadrature};
pub use entanglement::TwoSiteDensity;
pub use error::{Error, Result};
pub use thermal::{SignConvention, ThermalCorrelators};
