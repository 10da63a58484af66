//! Error type shared by all modules of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated a precondition (range, emptiness, compatibility).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A point was evaluated off the sampling grid of a field component.
    #[error("grid mismatch: coordinate {coordinate} is not a node of the {n}-point grid on axis {axis}")]
    GridMismatch { axis: usize, coordinate: f64, n: usize },

    /// Two distinct atoms of a measure coincide, so a Riesz kernel is singular.
    #[error("degenerate pair: points {i} and {j} coincide")]
    DegeneratePair { i: usize, j: usize },

    /// The operation is undefined for the given exponent.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A covariance factorization failed (matrix not positive definite).
    #[error("covariance factorization failed at pivot {pivot}: {value}")]
    Factorization { pivot: usize, value: f64 },
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
