use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input that passed shape checks produced numerically impossible
    /// output, e.g. a clearly negative probability.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("no convergence after {iterations} cycles (order {order}, residual {residual:e})")]
    ConvergenceFailure { order: usize, iterations: usize, residual: f64 },

    #[error("at alpha = {alpha}: {source}")]
    AtAlpha {
        alpha: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Parse(_) | Error::NumericalFailure(_) => 1,
            Error::ConvergenceFailure { .. } => 2,
            Error::Io(_) => 3,
            Error::AtAlpha { source, .. } => source.exit_code(),
        }
    }
}
