use thiserror::Error;

/// Errors from parameter validation, linear algebra, and the nu solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("matrix is not positive definite: pivot {pivot:e} at row {row}")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid standard parameters: {0}")]
    InvalidStandardParams(String),

    #[error("invalid natural parameters: {0}")]
    InvalidNaturalParams(String),

    #[error("invalid mean parameters: {0}")]
    InvalidMeanParams(String),

    #[error("invalid solver config: {0}")]
    InvalidSolverConfig(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("bracketing failed after {halvings} halvings (f(nu) still positive)")]
    BracketingFailed { halvings: u32 },

    #[error("newton iteration stalled after {iters} iterations (|f| = {final_abs_f:e})")]
    NewtonStalled { iters: u32, final_abs_f: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
