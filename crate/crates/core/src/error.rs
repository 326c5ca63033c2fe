//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Density/hazard is singular at the support endpoint for shape < 1.
    /// Callers must exclude such points from evaluation grids.
    #[error("density singular at support endpoint x = {x} (shape {shape} < 1)")]
    EndpointSingularity { x: f64, shape: f64 },

    /// A ratio was requested where the denominator vanishes (e.g. cdf at or
    /// below the support start).
    #[error("zero denominator at x = {x}")]
    ZeroDenominator { x: f64 },

    #[error("unknown pmf family: {0}")]
    UnknownFamily(String),

    #[error("system size {n} out of range for family of length {len}")]
    InvalidSystemSize { n: usize, len: usize },

    #[error("pmf atoms are inconsistent: {0}")]
    InvalidPmf(String),

    #[error("scenario inconsistent with requested operation: {0}")]
    ScenarioMismatch(String),

    #[error("all grid points trimmed; nothing left to compare")]
    AllPointsTrimmed,

    #[error("kernel not strictly positive at n = {n}, x = {x} (value {value})")]
    NonPositiveKernel { n: u32, x: f64, value: f64 },

    #[error("series tail bound {tail:e} not met at n_max = {n_max} (x = {x})")]
    NoConvergence { x: f64, n_max: u32, tail: f64 },

    #[error("grid points must be strictly increasing")]
    BadGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
