//! Error type shared across the crate.
//!
//! Every failure mode carries a stable machine-readable code (see
//! [`Error::code`]) so that CLI consumers and the C ABI can dispatch on it
//! without parsing prose. The human-readable message explains the concrete
//! instance.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A computation needed more series terms than the working precision
    /// provides. Retrying with a larger cutoff usually succeeds.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// Division by an exactly zero series, polynomial, or scalar.
    #[error("division by zero: {0}")]
    DivisionByZero(String),

    /// An operation requiring distinct points received coincident ones.
    #[error("points are not distinct: {0}")]
    NotDistinct(String),

    /// Two points that had to differ are equal (as balls or as points).
    #[error("points coincide: {0}")]
    SamePoint(String),

    /// A chart triple does not separate at the requested vertex, so the
    /// associated normalization is not defined there.
    #[error("triple is not separated by the vertex: {0}")]
    TripleNotSeparated(String),

    /// The answer cannot be certified at the working precision: a quantity
    /// that decides the branch is zero modulo precision but not exactly zero.
    #[error("indeterminate at working precision: {0}")]
    Indeterminate(String),

    /// Reducing a map or Moebius transformation produced a constant, so no
    /// tangent map exists in the requested direction.
    #[error("reduction is constant: {0}")]
    ConstantReduction(String),

    /// A ramification portrait failed validation; the report lists the
    /// violated conditions.
    #[error("portrait failed validation: {0}")]
    PortraitInvalid(String),

    /// The marked families are inconsistent with each other (duplicate
    /// labels, mismatched index sets, or coincident marked points).
    #[error("marked families are incompatible: {0}")]
    FamilyIncompatible(String),

    /// A vertex of the source tree has no image vertex in the target tree,
    /// so no cover between the trees exists.
    #[error("vertex has no image in the target tree: {0}")]
    VertexImageMissing(String),

    /// The dynamical compatibility check between two marked trees failed.
    #[error("trees are not dynamically compatible: {0}")]
    NotCompatible(String),

    /// A marked point's position disagrees between two trees that should
    /// agree on it.
    #[error("marking mismatch: {0}")]
    MarkingMismatch(String),

    /// Parse error in the textual series / map grammar.
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    /// Malformed job specification (missing keys, bad shapes, bad values).
    #[error("invalid job: {0}")]
    Job(String),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted(_) => "PRECISION_EXHAUSTED",
            Error::DivisionByZero(_) => "DIVISION_BY_ZERO",
            Error::NotDistinct(_) => "NOT_DISTINCT",
            Error::SamePoint(_) => "SAME_POINT",
            Error::TripleNotSeparated(_) => "TRIPLE_NOT_SEPARATED",
            Error::Indeterminate(_) => "INDETERMINATE",
            Error::ConstantReduction(_) => "CONSTANT_REDUCTION",
            Error::PortraitInvalid(_) => "PORTRAIT_INVALID",
            Error::FamilyIncompatible(_) => "FAMILY_INCOMPATIBLE",
            Error::VertexImageMissing(_) => "VERTEX_IMAGE_MISSING",
            Error::NotCompatible(_) => "NOT_COMPATIBLE",
            Error::MarkingMismatch(_) => "MARKING_MISMATCH",
            Error::Syntax { .. } => "SYNTAX_ERROR",
            Error::Job(_) => "INVALID_JOB",
        }
    }

    /// Process exit code the CLI maps this error to.
    ///
    /// Precision problems exit with 3 (retry with more precision), all other
    /// domain errors with 2. I/O errors are handled separately by the binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted(_) | Error::Indeterminate(_) => 3,
            _ => 2,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
