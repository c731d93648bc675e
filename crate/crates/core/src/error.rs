use thiserror::Error;

use crate::poly::MAX_VARS;

/// Errors raised by the algebra and classification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for {nvars} variable(s)")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("too many variables: {0} (at most {MAX_VARS} supported)")]
    TooManyVariables(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("not corank one (corank {0} at the base point)")]
    NotCorankOne(usize),
    #[error("not Morin (degenerate): {0}")]
    Degenerate(String),
    #[error("degenerate Σ² germ (not stable): {0}")]
    DegenerateSigma2(String),
    #[error("unrecognized germ: {0}")]
    Unrecognized(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid unfolding: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
