use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("basis contract violated: {0}")]
    Basis(String),

    #[error("maximizer did not converge; best objective found {best}")]
    Convergence { best: f64 },

    #[error("no sign change on [{lo}, {hi}] (gap {gap_lo} at lo, {gap_hi} at hi)")]
    Bracketing {
        lo: f64,
        hi: f64,
        gap_lo: f64,
        gap_hi: f64,
    },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
