use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size guard: {what} needs {requested}, limit is {limit}")]
    SizeGuard {
        what: &'static str,
        requested: u128,
        limit: u128,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not Hermitian (defect {defect:.3e}, allowed {allowed:.3e})")]
    NonHermitian { defect: f64, allowed: f64 },
    #[error("{method} did not converge after {iterations} iterations")]
    NoConvergence { method: &'static str, iterations: usize },
    #[error("eigen residual {residual:.3e} exceeds tolerance {allowed:.3e}")]
    ResidualExceeded { residual: f64, allowed: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
