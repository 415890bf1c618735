use thiserror::Error;

/// Errors raised by state construction, tomography and optimization.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A density matrix or tomogram failed one of its named invariants.
    #[error("{invariant} invariant violated: {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("objective returned a non-finite value at {0:?}")]
    NonFinite(Vec<f64>),

    #[error(
        "bracket [{lo}, {hi}] does not straddle the classical bound: \
         maximum {value_lo} at {lo}, {value_hi} at {hi}"
    )]
    Bracket {
        lo: f64,
        hi: f64,
        value_lo: f64,
        value_hi: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
