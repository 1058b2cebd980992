use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sieve limit {requested} exceeds configured maximum {max}")]
    Capacity { requested: u64, max: u64 },

    #[error("matrix dimension {dim} exceeds configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("{0} is not a perfect square")]
    NotPerfectSquare(u64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("singular matrix: zero pivot column {column}")]
    Singular { column: usize },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerical kernels (singularity, non-convergence).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::NoConvergence { .. })
    }

    /// Short machine-readable code used in CSV status columns.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Capacity { .. } => "capacity",
            Error::DimensionCap { .. } => "dim_cap",
            Error::NotPerfectSquare(_) => "not_square",
            Error::DimensionMismatch { .. } => "dim_mismatch",
            Error::Domain(_) => "domain",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::Singular { .. } => "singular",
            Error::NoConvergence { .. } => "no_convergence",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}
