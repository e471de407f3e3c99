use crate::exactlin::Rational;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid algebra: {0}")]
    Invalid(String),

    #[error("Jacobi identity fails on basis triple ({i}, {j}, {k}); residual {residual:?}")]
    Jacobi {
        i: usize,
        j: usize,
        k: usize,
        residual: Vec<Rational>,
    },

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
