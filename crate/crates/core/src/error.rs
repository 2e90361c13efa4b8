use thiserror::Error;

/// Errors raised by oracles, kernels and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("oracle returned a non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("oracle failure at iteration {iteration}: {source}")]
    AtIteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("spectral factorization failed: {0}")]
    Factorization(String),

    #[error("power iteration did not converge after {iterations} iterations")]
    PowerIteration { iterations: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ratings parse error on line {line}: {message}")]
    RatingsParse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn at(self, iteration: usize) -> Self {
        match self {
            e @ Error::AtIteration { .. } => e,
            e => Error::AtIteration {
                iteration,
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
