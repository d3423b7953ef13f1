use alloc::string::String;

use num_complex::Complex64;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A domain inequality does not hold; the payload names it.
    #[error("constraint violated: {0}")]
    ConstraintViolation(&'static str),

    #[error("truncation N = {0} is too small (need N >= 2)")]
    InvalidTruncation(usize),

    #[error("unknown construction mode `{0}` (expected `exact` or `compressed`)")]
    InvalidMode(String),

    #[error("operation `{op}` is not defined for the {kind} domain")]
    UnsupportedDomain { op: &'static str, kind: &'static str },

    #[error("lambda = {lambda} is not interior to the domain: {reason}")]
    DomainViolation { lambda: Complex64, reason: &'static str },

    #[error("lambda = {lambda} is outside the proved resolvent regions: {reason}")]
    RegionViolation { lambda: Complex64, reason: &'static str },

    #[error("lambda = {lambda} is within the safety margin of the eigenvalue {eigenvalue}")]
    NearEigenvalue { lambda: f64, eigenvalue: f64 },

    #[error("geometric series with ratio {ratio} does not converge")]
    SeriesDivergence { ratio: f64 },

    #[error("matrix `{name}` is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { name: String, deviation: f64 },

    #[error("eigenvalue clusters overlap near {target} (eigenvalue {eigenvalue} sits in the guard shell)")]
    ClusterAmbiguity { target: f64, eigenvalue: f64 },

    #[error("word degree {degree} exceeds the guard {max}")]
    DegreeGuard { degree: usize, max: usize },

    #[error("cannot parse operator word: {0}")]
    InvalidWord(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear system is numerically singular")]
    Singular,
}
