use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    BranchCut(String),

    #[error("series did not converge in {terms} terms (last term magnitude {last_term:e})")]
    Truncation { terms: usize, last_term: f64 },

    #[error("fundamental solution evaluated at its singularity")]
    Singularity,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("point ({0}, {1}) is within one grid spacing of the boundary")]
    TooClose(f64, f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("first-kind system for the harmonic extension is rank deficient (sigma_min = {0:e})")]
    Capacity(f64),

    #[error("incompatible Neumann data: defect {defect:e} on a {dim}-dimensional cokernel")]
    IncompatibleData { defect: f64, dim: usize },

    #[error("k = {0} is not at a breakdown wavenumber (relative sigma_min {1:e})")]
    NotAtDip(f64, f64),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
