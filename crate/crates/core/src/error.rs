use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid size: {0}")]
    Size(String),
    #[error("size bound exceeded: {what} = {value} > {bound}")]
    SizeBound {
        what: String,
        value: usize,
        bound: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid permutation: {0}")]
    InvalidPerm(String),
    #[error("permutation {perm} does not stabilize {subset:?}")]
    NotStabilizing { perm: String, subset: Vec<usize> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cocycle entry at {subset:?} is odd for h = {h}, g = {g}")]
    OddCocycleEntry {
        h: String,
        g: String,
        subset: Vec<usize>,
    },
    #[error("cocycle is not normalized: {0}")]
    Unnormalized(String),
    #[error("inconsistent module action: {0}")]
    InconsistentAction(String),
    #[error("mathematical expectation failed: {0}")]
    Expectation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
