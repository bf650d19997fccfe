use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid monomial {exponents:?}: {reason}")]
    InvalidMonomial { exponents: Vec<u32>, reason: String },

    #[error("degree {0} is not supported, homogeneous potentials must have degree >= 2")]
    DegreeTooLow(u32),

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),

    #[error("no start point converged to a critical point ({starts} starts)")]
    NoConvergence { starts: usize },

    #[error("case-study cross-validation failed: {0}")]
    Mismatch(String),

    #[error("malformed tensor file at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid tensor file field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}
