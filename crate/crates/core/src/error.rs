use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field modulus {0} is not a prime in 2..=251")]
    InvalidModulus(u32),

    #[error("zero has no inverse")]
    ZeroInverse,

    #[error("value {value} is not an element of GF({q})")]
    NotInField { value: u64, q: u8 },

    #[error("format error on line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("{0}")]
    Semantic(String),

    #[error("index {index} out of range 0..{len}")]
    OutOfBounds { index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u8, right: u8 },

    #[error("blow-up is defined only on 0/1/X patterns (entry {value} at row {row}, column {col})")]
    NotAPattern { row: usize, col: usize, value: u8 },

    #[error("completion disagrees with the mask at row {row}, column {col}")]
    MaskDisagreement { row: usize, col: usize },

    #[error("oracle refused: {required} completions exceed the budget of {budget}")]
    BudgetExceeded { required: String, budget: u64 },

    #[error("no completion found under pruning (threshold {threshold})")]
    SearchExhausted { threshold: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
