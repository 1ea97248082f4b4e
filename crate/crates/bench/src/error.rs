use std::fmt;

use gsmm_core::Error as CoreError;

/// Failure of a CLI operation, grouped by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchError {
    /// Invalid flags or configuration (exit 2).
    Config(String),
    /// Dataset missing or malformed (exit 3).
    Data(String),
    /// Run stopped on a non-finite value; the partial CSV is kept (exit 4).
    Numerical(String),
    /// Output could not be written (exit 1).
    Io(String),
}

impl BenchError {
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) => 2,
            BenchError::Data(_) => 3,
            BenchError::Numerical(_) => 4,
            BenchError::Io(_) => 1,
        }
    }

    /// Sorts a core error by where it came from.
    pub fn from_core(err: CoreError) -> Self {
        match err {
            CoreError::Parse { .. } | CoreError::Labels(_) | CoreError::Io(_) => BenchError::Data(err.to_string()),
            CoreError::NonFinite { .. } => BenchError::Numerical(err.to_string()),
            _ => BenchError::Config(err.to_string()),
        }
    }
}

impl fmt::Display for BenchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchError::Config(m) => write!(f, "config error: {m}"),
            BenchError::Data(m) => write!(f, "data error: {m}"),
            BenchError::Numerical(m) => write!(f, "numerical abort: {m}"),
            BenchError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for BenchError {}

impl From<std::io::Error> for BenchError {
    fn from(err: std::io::Error) -> Self {
        BenchError::Io(err.to_string())
    }
}

pub type BenchResult<T> = std::result::Result<T, BenchError>;
