//! Shared error type for the kernel.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DgError {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse scalar from {0:?}")]
    ScalarParse(String),

    #[error("dimension mismatch: {0}")]
    ShapeMismatch(String),

    #[error("linear system has no solution")]
    Inconsistent,

    #[error("subspace is not contained in the ambient space")]
    NotASubspace,

    #[error("complex invalid: d^2 != 0 at degree {degree}")]
    DifferentialSquare { degree: i32 },

    #[error("complex invalid: {0}")]
    MalformedComplex(String),

    #[error("chain map is not closed (d f != (-1)^|f| f d fails at degree {degree})")]
    NotClosed { degree: i32 },

    #[error("expected a map of degree {expected}, got degree {got}")]
    WrongDegree { expected: i32, got: i32 },

    #[error("dg category axiom violated: {axiom} (witness: {witness})")]
    AxiomViolation { axiom: String, witness: String },

    #[error("dg functor invalid: {0}")]
    InvalidFunctor(String),

    #[error("unknown object {0:?}")]
    UnknownObject(String),

    #[error("morphism endpoints do not match: {0}")]
    EndpointMismatch(String),

    #[error("Maurer-Cartan equation fails for twisted object {object:?} at entry ({row},{col})")]
    MaurerCartan {
        object: String,
        row: usize,
        col: usize,
    },

    #[error("witness invalid: {0}")]
    InvalidWitness(String),

    #[error("element {0:?} is not idempotent")]
    NotIdempotent(String),

    #[error("supplied resolution is not exact at homological degree {degree}")]
    ResolutionNotExact { degree: i32 },

    #[error("module is not projective: {0}")]
    NotProjective(String),

    #[error("path algebra presentation invalid: {0}")]
    BadPresentation(String),

    #[error("nilpotency bound violated: a path of length {0} survives the relations")]
    NilpotencyViolated(usize),

    #[error("truncation bound must be >= 0")]
    NegativeTruncation,

    #[error("object list is not closed enough to stabilize the colimit: {0}")]
    ColimitUnstable(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, DgError>;
