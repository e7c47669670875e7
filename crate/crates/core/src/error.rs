use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} too large: {actual} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("invalid edge {0}-{1}")]
    InvalidEdge(usize, usize),

    #[error("ordering is not a permutation of the vertex set")]
    NotPermutation,

    #[error("orientation contains a directed cycle")]
    Cyclic,

    #[error("invalid elimination forest: {0}")]
    InvalidForest(String),

    #[error("obstruction count mismatch: expected 2 minimal obstructions, derived {0}")]
    ObstructionCount(usize),

    #[error("brute-force guard exceeded: {0} candidate maps")]
    Guard(String),

    #[error("expansion did not evaluate to an integer: {0}")]
    NonInteger(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_size(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::TooLarge {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
