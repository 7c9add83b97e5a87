use std::path::PathBuf;

use thiserror::Error;

use crate::edit::Edit;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("token {0:?} is empty or contains whitespace")]
    InvalidToken(String),

    #[error("edit {edit} is out of range for a source of {len} tokens")]
    OutOfRange { edit: Edit, len: usize },

    #[error("edit {0} does not change the source")]
    IdentityEdit(Edit),

    #[error("edits {first} and {second} conflict")]
    Conflict { first: Edit, second: Edit },

    #[error("edit {0} appears more than once")]
    DuplicateEdit(Edit),

    #[error("edit set is for a source of {found} tokens, expected {expected}")]
    SourceMismatch { expected: usize, found: usize },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: {source}")]
    Validation {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(
        "line count mismatch: {} has {expected} lines but {} has {found}",
        expected_path.display(),
        path.display()
    )]
    LengthMismatch {
        expected_path: PathBuf,
        expected: usize,
        path: PathBuf,
        found: usize,
    },

    #[error("{what}: expected {expected} items, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("sentence {index}: {message}")]
    Sentence { index: usize, message: String },
}

impl Error {
    pub(crate) fn in_file(path: impl Into<PathBuf>, source: Error) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(source),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
