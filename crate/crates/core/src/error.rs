use thiserror::Error;

/// Errors produced by divergence evaluation, the linear model and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter lies outside the domain of its entropy family.
    #[error("domain error: {constraint} (got {value})")]
    Domain { constraint: String, value: f64 },

    /// The family has no (a, b) form and must use its own code path.
    #[error("{0} entropy has no (a, b) reduction")]
    NotReducible(&'static str),

    /// A component could not be evaluated (log of zero, zero to a negative power, ...).
    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// The requested combination is not provided.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A model component q = Hx vanished where the divergence needs it positive.
    #[error("model degenerate: q[{index}] = {value}")]
    ModelDegenerate { index: usize, value: f64 },

    #[error("preconditioner degenerate: V[{index}] = {value}")]
    PreconditionerDegenerate { index: usize, value: f64 },

    #[error("line search failed after {backtracks} backtracks")]
    LineSearchFailed { backtracks: usize },

    /// Invalid solver or operator configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(constraint: impl Into<String>, value: f64) -> Self {
        Error::Domain {
            constraint: constraint.into(),
            value,
        }
    }

    pub(crate) fn eval(msg: impl Into<String>) -> Self {
        Error::Eval(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            Error::Io(e.to_string())
        } else {
            Error::Parse(e.to_string())
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
