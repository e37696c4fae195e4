//! Error types shared across the crate.

use thiserror::Error;

use crate::text::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rank n must be at least 1")]
    EmptyConfig,

    #[error("slope m_{index} must be nonzero: g_{index}(a) = m_{index}·a is injective only for m_{index} ≠ 0")]
    ZeroSlope { index: usize },

    #[error("direction index {dir} out of range 1..={n}")]
    DirectionOutOfRange { dir: usize, n: usize },

    #[error("element has {found} coordinates per index tuple, config expects {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is undefined on the zero element")]
    ZeroElement,

    #[error("multiplier search exhausted after {tried} candidates")]
    SearchExhausted { tried: usize },

    #[error("generator support must lie inside the result box {bound}")]
    SupportOutsideBox { bound: String },

    #[error("operation requires rank n = 1, config has n = {0}")]
    NotRankOne(usize),

    #[error("lower indices must be non-negative, found {0}")]
    NegativeLowerIndex(i64),

    #[error("derivation table does not cover {missing}")]
    IncompleteTable { missing: String },

    #[error("duplicate derivation table entry for {0}")]
    DuplicateEntry(String),

    #[error("not a derivation: {0}")]
    NotADerivation(String),

    #[error("cannot read {path}: {message}")]
    FileRead { path: String, message: String },

    #[error(transparent)]
    Parse(#[from] ParseError),
}
