use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (relative asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("matrix has a non-finite entry")]
    NonFinite,
    #[error("{routine} did not converge within {sweeps} sweeps")]
    NoConvergence { routine: &'static str, sweeps: usize },
    #[error("value {value} lies outside the domain {domain}")]
    Domain { value: f64, domain: String },
    #[error("operand is not positive definite (smallest eigenvalue {0:e})")]
    NotPositiveDefinite(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("infeasible shape: {0}")]
    InfeasibleShape(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}
