use std::path::PathBuf;

use crate::params::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parameter `{name}` is not a finite number")]
    NonFinite { name: &'static str },

    #[error("parameters are outside the feasibility set: {}", .0.failed().join(", "))]
    NotInPhi(ValidationReport),

    #[error("k = {k} is outside the domain of this function")]
    Domain { k: f64 },

    #[error("evaluation at k = {k} overflows f64")]
    Overflow { k: f64 },

    #[error("numeric failure in {what} at k = {k}")]
    Numeric { what: &'static str, k: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid probe configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}:{line}: {msg}")]
    ParamFile {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("need at least {needed} observations with {needed} distinct k values, got {got} ({distinct} distinct)")]
    InsufficientData {
        needed: usize,
        got: usize,
        distinct: usize,
    },

    #[error("invalid observation at row {row}: {msg}")]
    BadObservation { row: usize, msg: String },

    #[error("initial guess is outside the feasibility set: {}", .0.failed().join(", "))]
    InitOutsidePhi(ValidationReport),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
