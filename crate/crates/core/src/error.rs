use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate contrast: theta must be finite and non-zero, got {0}")]
    DegenerateContrast(f64),

    #[error("domain error: {0}")]
    Domain(String),

    /// A transfer matrix drifted so far from SU(1,1) that amplitudes cannot be read off.
    #[error("numerical corruption: {0}")]
    NumericalCorruption(String),

    #[error("transfer-matrix product overflow: |z1| = {0:e} exceeds the guard")]
    Overflow(f64),

    #[error("half-bound state not positive: u({x}) = {value}")]
    NotPositive { x: f64, value: f64 },

    #[error("not a half-bound state: {0}")]
    NotHalfBound(String),

    #[error("integration failed to converge after {halvings} step halvings (defect {defect:e})")]
    IntegrationFailure { halvings: u32, defect: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
