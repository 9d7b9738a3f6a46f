use std::fmt;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on arguments was violated (bad sizes, out-of-range
    /// values, mismatched permutations).
    Domain(String),
    /// A structural precondition on a matrix was violated (e.g. block
    /// decomposition of a matrix that does not satisfy conditions 1-4).
    Structure(String),
    /// A configured search or enumeration budget was exceeded.
    Resource(String),
    /// A text input could not be parsed. `line` is 1-based.
    Parse { line: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "{msg}"),
            Error::Structure(msg) => write!(f, "{msg}"),
            Error::Resource(msg) => write!(f, "{msg}"),
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
