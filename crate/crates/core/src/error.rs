use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {0} exceeds the supported maximum of {max}", max = crate::matrix::MAX_DIM)]
    DimensionLimit(usize),

    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eig:.3e})")]
    NotPsd { min_eig: f64 },

    #[error("iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("non-finite entry at position ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("unknown gallery name `{0}`")]
    UnknownName(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("schema error in field `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("i/o error on `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
