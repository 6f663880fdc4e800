use thiserror::Error;

/// Errors raised by construction and evaluation of graded-algebra data.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: permutation acts on {expected} letters, got {got} degrees")]
    LengthMismatch { expected: usize, got: usize },

    #[error("arity mismatch: map takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("argument {index} is not homogeneous")]
    InhomogeneousArgument { index: usize },

    #[error("vector or map belongs to a different graded space")]
    SpaceMismatch,

    #[error("degree mismatch: entry for {context} has degree {got}, expected {expected}")]
    DegreeMismatch {
        context: String,
        expected: i64,
        got: i64,
    },

    #[error("slot {slot} out of range for arity-{arity} map")]
    SlotOutOfRange { slot: usize, arity: usize },

    #[error("map `{0}` is not antisymmetric")]
    NotAntisymmetric(String),

    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),

    #[error("duplicate entry for basis tuple {0}")]
    DuplicateEntry(String),

    #[error("{0} must be a differential: composite with itself is nonzero")]
    NotDifferential(String),

    #[error("l2 does not satisfy the Jacobi identity; refusing to build the differential")]
    NotLie,

    #[error("contraction invariant violated: {0}")]
    ContractionInvariant(String),

    #[error("series component at arity {arity} has B-degree {got}, expected {expected}")]
    SeriesDegree { arity: usize, expected: i64, got: i64 },

    #[error("structure map at arity 1 must equal the differential of its space")]
    WrongUnaryPart,

    #[error("gauge constraint violated: {0}")]
    GaugeConstraint(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid model: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
