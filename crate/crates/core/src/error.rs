use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem constants: {0}")]
    InvalidConstants(String),

    #[error("degenerate constants: {formula} is undefined ({reason})")]
    DegenerateConstants {
        formula: &'static str,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite value in {what}{}", iteration.map(|t| format!(" at iteration {t}")).unwrap_or_default())]
    NonFinite {
        what: &'static str,
        iteration: Option<usize>,
    },

    #[error("dual point is not feasible for the {domain} domain")]
    Infeasible { domain: &'static str },

    #[error("sample index {index} out of range for {len} samples")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid hyperparameters: {0}")]
    InvalidHyper(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("unschedulable: {0}")]
    Unschedulable(String),

    #[error("problem has no exact best-response oracle; use verify::approx_best_response")]
    NoBestResponse,

    #[error("problem has no primal-gradient oracle")]
    NoPrimalGradient,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("label error: {0}")]
    Labels(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
