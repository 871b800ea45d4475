//! Variable-elasticity-of-substitution production function in intensive
//! form,
//!
//! ```text
//! f(k) = A k^θ (α k^ψ + β)^ω,
//! ```
//!
//! with parameter validation, stable evaluation of `f`, `f'`, `f''`, the
//! elasticity of substitution, numerical Inada checks, asymptotic
//! Cobb-Douglas limits and least-squares calibration.
//!
//! ```
//! use ves_core::{ValidatedParams, elasticity::sigma_closed};
//!
//! let p = ValidatedParams::case1();
//! assert!((p.f(1.0).unwrap() - 1.05).abs() < 1e-12);
//! assert!(sigma_closed(&p, 1.0).unwrap() > 1.0);
//! ```

pub mod asymptotics;
pub mod calibrate;
pub mod cli;
pub mod elasticity;
mod error;
pub mod eval;
pub mod figures;
pub mod format;
pub mod grid;
pub mod params;
pub mod svg;
pub mod verify;

pub use error::{Error, Result};
pub use eval::EvalRow;
pub use grid::{Grid, Spacing};
pub use params::{RawParams, ValidatedParams, ValidationReport};
