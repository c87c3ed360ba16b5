use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Parse failure with the byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("singular matrix (det = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("metric not positive definite: A = {a}, B = {b} (need A > sqrt(2) B >= 0)")]
    NotPositiveDefinite { a: f64, b: f64 },

    #[error("degenerate metric: A^2 - 2B^2 = {0:e}")]
    DegenerateMetric(f64),

    #[error("zero or null vector")]
    ZeroVector,

    #[error("S-basis is degenerate (Gram determinant {0:e})")]
    DegenerateBasis(f64),

    #[error("S-basis is not orthonormal (Gram deviation {0:e})")]
    NotOrthonormalBasis(f64),

    #[error("vector is not a unit vector (| |u|^2 - 1 | = {0:e})")]
    NotUnitVector(f64),

    #[error("angle out of range: cos(phi) = {0}")]
    AngleOutOfRange(f64),

    #[error("degenerate 2-plane (Gram determinant {0:e})")]
    DegeneratePlane(f64),

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),

    #[error("property {property} not satisfied (residual {residual:e})")]
    PropertyNotSatisfied { property: &'static str, residual: f64 },
}
