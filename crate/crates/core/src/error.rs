use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    InvalidPrime(u64),
    #[error("element is not integral at the prime")]
    NotIntegral,
    #[error("finite field mismatch")]
    FieldMismatch,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error at byte {offset}: {message}")]
    ParseError { offset: usize, message: String },
    #[error("all terms cancel: empty polynomial")]
    EmptyPolynomial,
    #[error("unknown variable '{0}' (only x and y are allowed)")]
    UnknownVariable(String),
    #[error("Newton polygon is not two-dimensional")]
    DegeneratePolygon,
    #[error("point lies outside the Newton polygon")]
    OutsidePolygon,
    #[error("all polynomials in the system are zero")]
    IndeterminateSystem,
    #[error("point is not an interior lattice point")]
    NotInterior,
    #[error("v_can value {0} outside (-1, 0]: hypothesis violated")]
    HypothesisViolation(String),
    #[error("form is supported outside the interior lattice points")]
    NotHolomorphic,
    #[error("value out of range")]
    OutOfRange,
    #[error("invalid extension degree")]
    InvalidDegree,
    #[error("degree not coprime to the granularity")]
    NotCoprime,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
