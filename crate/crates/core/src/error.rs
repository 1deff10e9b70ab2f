use thiserror::Error;

/// Errors raised by the library. Negative decisions (a pair is not
/// majorized, an operator is not a preserver) are values, not errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {op} got {left:?} and {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("expected a square matrix, got {0}x{1}")]
    NotSquare(usize, usize),

    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },

    #[error("data length {got} does not match {rows}x{cols}")]
    BadLength { rows: usize, cols: usize, got: usize },

    #[error("invalid circulant combination: {0}")]
    InvalidCombination(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group inverse does not exist: operator has index {0}")]
    IndexTooLarge(usize),

    #[error("operator does not preserve Hadamard circulant majorization")]
    NotAPreserver,

    #[error("operator is not invertible")]
    NotInvertible,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
