use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("NaN is not a valid extended real")]
    NaN,

    #[error("+inf is not a valid extended real")]
    PositiveInfinity,

    #[error("vector tag 0 is reserved for matrix entries")]
    ReservedTag,

    #[error("triple with tag 0 is not a product of a matrix and a vector entry")]
    NotAProduct,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{what} needs {needed} units but the budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("row {row} was reported by {reports} pivots instead of exactly one")]
    TieEncoding { row: usize, reports: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),

    #[error("state {state} out of range for a model with {states} states")]
    StateOutOfRange { state: usize, states: usize },

    #[error("instance too large for exhaustive search: {0} paths")]
    TooLarge(u128),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("correctness mismatch: {0}")]
    Mismatch(String),

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Attaches the file the error came from, unless it already names one.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Error {
        match self {
            e @ (Error::Io { .. } | Error::InFile { .. }) => e,
            e => Error::InFile {
                path: path.into(),
                source: Box::new(e),
            },
        }
    }
}

/// Location-annotated failure while reading one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}
