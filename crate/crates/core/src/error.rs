use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance too large for {what}: {size} > {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("pair set is not a valid cover")]
    InvalidCover,

    #[error("matching is not perfect: {0}")]
    NotPerfect(String),

    #[error("path is not alternating: {0}")]
    NotAlternating(String),

    #[error("vertex {0} already inserted")]
    DoubleInsert(usize),

    #[error("vertex {0} already removed")]
    DoubleRemove(usize),

    #[error("no perfect matching exists")]
    NoPerfectMatching,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
