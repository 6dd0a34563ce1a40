use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the indexing, query, ingestion, and bench modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node id {0} does not exist in this tree")]
    InvalidNode(usize),

    #[error("window size k must be at least 1")]
    InvalidK,

    #[error("start {position} is not a window of symbol {symbol:?} inside a single record")]
    ForeignStart { symbol: char, position: usize },

    #[error("more than one branch owns symbol {0:?}")]
    DuplicateBranch(char),

    #[error("the sequential baseline indexes exactly one record, got {0}")]
    SingleRecordRequired(usize),

    #[error("pattern must be non-empty")]
    EmptyPattern,

    #[error("pattern length {pattern_len} exceeds the window size {k} of this index")]
    PatternTooLong { pattern_len: usize, k: usize },

    #[error("repeat threshold must be at least 2, got {0}")]
    InvalidThreshold(usize),

    #[error("repeat enumeration needs a fixed-window tree, not a full suffix tree")]
    KmerTreeRequired,

    #[error("{0}")]
    ConfigError(String),

    #[error("durations must be positive and finite")]
    InvalidDuration,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {reason}")]
    FormatError { path: PathBuf, reason: String },

    #[error("{0}")]
    InvalidArgs(String),
}

impl Error {
    /// Stable error name, printed by the CLI next to the diagnostic.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidNode(_) => "InvalidNode",
            Error::InvalidK => "InvalidK",
            Error::ForeignStart { .. } => "ForeignStart",
            Error::DuplicateBranch(_) => "DuplicateBranch",
            Error::SingleRecordRequired(_) => "SingleRecordRequired",
            Error::EmptyPattern => "EmptyPattern",
            Error::PatternTooLong { .. } => "PatternTooLong",
            Error::InvalidThreshold(_) => "InvalidThreshold",
            Error::KmerTreeRequired => "KmerTreeRequired",
            Error::ConfigError(_) => "ConfigError",
            Error::InvalidDuration => "InvalidDuration",
            Error::Io { .. } => "IoError",
            Error::FormatError { .. } => "FormatError",
            Error::InvalidArgs(_) => "InvalidArgs",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
