use crate::mat::ComplexMatrix;

/// Library-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max entry deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd {
        min_eigenvalue: f64,
        /// Normalized eigenvector for the most negative eigenvalue, as a column.
        witness: Box<ComplexMatrix>,
    },

    #[error("map action is not linear (residual {0:.3e})")]
    NonlinearAction(f64),

    #[error("eigendecomposition residual {0:.3e} exceeds the backend contract")]
    EigenFailed(f64),

    #[error("operation not supported for cone {0}")]
    UnsupportedCone(String),

    #[error("no sampler available for cone {0}")]
    NoSampler(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("functional is not a state: {0}")]
    NotState(String),

    #[error("unsupported request: {0}")]
    Unsupported(String),

    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
