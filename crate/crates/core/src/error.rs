use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("factors {d1} and {d2} do not give a coprime factorisation of {n}")]
    NotCoprime { n: usize, d1: usize, d2: usize },

    #[error("integer overflow in group ring arithmetic")]
    Overflow,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),

    #[error("classification failure: {0}")]
    Classification(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{what} of size {size} exceeds the guard {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
}
