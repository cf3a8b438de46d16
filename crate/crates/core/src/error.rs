use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Falsification` is not a failure of the library itself: it reports a
/// computed instance where a claimed identity or existence statement does not
/// hold under a literal reading. Callers are expected to treat it as a
/// first-class result (the CLI maps it to a dedicated exit code).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A query exceeds the range covered by a precomputed table.
    #[error("range error: {0}")]
    Range(String),

    /// The request is valid but exceeds the enumeration budget.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// A numeric routine failed to converge or lost its bracket.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A verified counterexample to a claimed identity or existence statement.
    #[error("falsification finding: {0}")]
    Falsification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
