use thiserror::Error;

/// Errors raised by parsing, construction and contract checks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate {kind} declaration `{name}`")]
    Duplicate {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("line {line}: unknown {kind} `{name}`")]
    Unknown {
        line: usize,
        kind: &'static str,
        name: String,
    },
    #[error("invalid event name `{0}`")]
    InvalidEventName(String),
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("conflicting flags for shared event `{0}`")]
    FlagConflict(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid automaton: {0}")]
    Invalid(String),
    /// Missing arguments and unreadable or unwritable files.
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
