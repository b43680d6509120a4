//! Crate-wide error type. Validation errors carry the violated invariant and
//! the magnitude of the violation.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^H| entry = {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace differs from 1 by {deviation:.3e}")]
    NotUnitTrace { deviation: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue = {min_eigenvalue:.3e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("probability {value:.3e} is more negative than the tolerance allows")]
    NegativeProbability { value: f64 },

    #[error("eigenvalue gap {gap:.3e} is below the minimum {min:.3e}")]
    GapTooSmall { gap: f64, min: f64 },

    #[error("perturbed diagonal leaves the probability simplex: entry {index} = {value:.3e}")]
    DiagonalOutOfRange { index: usize, value: f64 },

    #[error("state is not local to the center: HS distance {distance:.3e} > radius {radius:.3e}")]
    NotLocal { distance: f64, radius: f64 },

    #[error("no two-design construction available for dimension {dim}")]
    UnsupportedDimension { dim: usize },

    #[error("{what} = {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("tableau filling is not semistandard for the given diagram")]
    NotSemistandard,

    #[error("local parameters do not match the model index set")]
    IndexMismatch,

    #[error("matrix is not symmetric positive definite")]
    NotSpd,

    #[error("degenerate functional: variance {variance:.3e} leaves no information direction")]
    DegenerateFunctional { variance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
