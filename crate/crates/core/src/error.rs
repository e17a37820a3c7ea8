use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} supports dimension at most {limit}, got {got}")]
    Capability {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("scale factor must be nonnegative")]
    NegativeScale,

    #[error("zero vector not allowed: {0}")]
    ZeroVector(&'static str),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("singular matrix")]
    Singular,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("variant {variant} requires dimension {required}, got {got}")]
    VariantDimension {
        variant: &'static str,
        required: usize,
        got: usize,
    },

    #[error("piece count {count} exceeds cap {cap}")]
    Capacity { count: usize, cap: usize },

    #[error("valuation is not polynomial of degree <= {bound} in the scaling parameter")]
    NotPolynomial { bound: usize },

    #[error("valuation is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: usize },

    #[error("invalid test pair: {0}")]
    InvalidPair(String),

    #[error("rejected input: {0}")]
    Rejected(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
