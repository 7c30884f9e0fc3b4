use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by constructions and checks.
///
/// Axiom failures are never errors: they are reported as fail verdicts with a
/// witness. Errors mean a precondition was violated or a quantifier instance
/// could not be evaluated.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("object mismatch: expected {expected}, found {found}")]
    ObjectMismatch { expected: String, found: String },

    #[error("grading monoid mismatch: {0}")]
    MonoidMismatch(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("invalid graded object: {0}")]
    InvalidObject(String),

    #[error("invalid graded map: {0}")]
    InvalidMap(String),

    #[error("coverage error: {0}")]
    Coverage(String),

    #[error("structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("unit scalar a(0) must be 1, found {0}")]
    BadUnitScalar(String),

    #[error("idempotent scalars must be 0 or 1, found {0}")]
    NotIdempotent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The scalar route and the matrix route disagreed on a structural instance.
    #[error("evaluation routes disagree: {0}")]
    RouteDisagreement(String),
}
