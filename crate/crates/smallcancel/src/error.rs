use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("relator reduces to the empty word")]
    EmptyRelator,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("presentation is not symmetrized")]
    NotSymmetrized,
    #[error("presentation does not satisfy the required small-cancellation condition: {0}")]
    NotSmallCancellation(String),
    #[error("presentation has nonempty pieces; an unbounded region needs a piece-free presentation")]
    NotPieceFree,
    #[error("element lies outside the certified region: {0}")]
    OutOfRegion(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("not in free-product normal form: {0}")]
    NotNormalForm(String),
    #[error("letter graph valency {found} exceeds the bound {bound}")]
    ValencyExceeded { found: usize, bound: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
