use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: source has arity {source_arity}, target has arity {target_arity}")]
    ArityMismatch {
        source_arity: usize,
        target_arity: usize,
    },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("order mismatch: {0}")]
    OrderMismatch(String),

    #[error("algebra {name:?} violates the Nambu identity on {failures} basis tuple(s)")]
    InvalidAlgebra { name: String, failures: usize },

    #[error("map is not an n-Lie morphism on {failures} basis tuple(s)")]
    InvalidMorphism { failures: usize },

    #[error("deformation does not satisfy the structure equations through order {order}")]
    NotValidated { order: usize },

    #[error("cochain triple is not a cocycle")]
    NotCocycle,

    #[error("obstruction is not a cocycle; the deformation equations were not satisfied upstream")]
    ObstructionNotCocycle,

    #[error("delta_out * delta_in is nonzero; the cochain complex is broken")]
    BrokenComplex,

    #[error("the deformations have different base morphisms")]
    BaseMismatch,

    #[error("boundary vector {index} lies outside the span of the cycle basis")]
    SubspaceViolation { index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
