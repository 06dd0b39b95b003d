use thiserror::Error;

/// Errors raised by the algebra routines and the command line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An element does not belong to the group or module it was used with.
    #[error("structural mismatch: {0}")]
    Structural(String),
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// The element is not annihilated by the required difference operator.
    #[error("not polynomial-like of order {order}: D^{arity} is {value} at {tuple}")]
    NotPolynomialLike {
        order: usize,
        arity: usize,
        tuple: String,
        value: String,
    },
    /// A checked property failed; carries the name and a witness description.
    #[error("property violated ({name}): {detail}")]
    Violation { name: String, detail: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
