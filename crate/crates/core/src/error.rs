use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite coordinate in {what} {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("centers {first} and {second} are identical and cannot be separated by any threshold")]
    DuplicateCenters { first: usize, second: usize },

    #[error("{what} {index} lies outside the domain [-{bound}, {bound}]^d")]
    OutsideDomain {
        what: &'static str,
        index: usize,
        bound: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("sampling cap of {cap} exceeded: {context}")]
    SampleCapExceeded { cap: u64, context: String },

    #[error("size cap exceeded: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
