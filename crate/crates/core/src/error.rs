use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cascade: {0}")]
    InvalidCascade(String),

    #[error("symbol {symbol} is not in the transmission alphabet of size {q}")]
    SymbolOutOfRange { symbol: u32, q: u32 },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("word length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid budget vector: {0}")]
    InvalidBudget(String),

    #[error("invalid listen profile: {0}")]
    InvalidProfile(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("no convergence after {iterations} iterations: {context}")]
    NoConvergence { iterations: usize, context: String },

    #[error("root is not bracketed: {0}")]
    Bracket(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("collision in block {block}, slot {slot}: nodes {upstream} and {downstream} both transmit")]
    Collision {
        block: usize,
        slot: usize,
        upstream: usize,
        downstream: usize,
    },

    #[error("decode mismatch at node {node}, block {block}: expected {expected:?}, got {got:?}")]
    DecodeMismatch {
        node: usize,
        block: usize,
        expected: Vec<u64>,
        got: Option<Vec<u64>>,
    },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
