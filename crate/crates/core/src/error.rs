use thiserror::Error;

use crate::exterior::KForm;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: expected a {expected}-form, got a {found}-form")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid multi-index {indices:?} in dimension {dim}")]
    InvalidIndex { indices: Vec<usize>, dim: usize },

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("Jacobi identity fails: d(de^{index}) = {residual}")]
    Jacobi { index: usize, residual: KForm },

    #[error("form is not closed: d(a) = {differential}")]
    NotClosed { differential: KForm },

    #[error("J^2 != -Id")]
    NotComplexStructure,

    #[error("the given (1,0)-forms and their conjugates do not span the complexified dual: not a coframe")]
    NotCoframe,

    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,

    #[error("degenerate pairing: the skew matrix is singular")]
    DegeneratePairing,

    #[error("input vectors are linearly dependent")]
    DependentVectors,

    #[error("anti-invariant frame construction needs n even, got n = {n} (real dimension {dim})")]
    OddHalfDimension { n: usize, dim: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),
}
