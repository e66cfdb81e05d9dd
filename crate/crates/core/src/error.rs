use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation {0:?}: expected each of 1..=n exactly once")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid pointed composition {parts:?}: {reason}")]
    InvalidComposition { parts: Vec<usize>, reason: &'static str },

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("composition {0} has a trailing zero part")]
    TrailingZero(String),

    #[error("{0:?} is not a knapsack partition")]
    NotKnapsack(Vec<usize>),

    #[error("{value} is not a sum of parts of {lambda:?}")]
    NotRepresentable { value: usize, lambda: Vec<usize> },

    #[error("composition {composition} is not in V({partition})")]
    NotInV { composition: String, partition: String },

    #[error("pointed part must be positive for this construction")]
    ZeroPointedPart,

    #[error("{what} requested for n = {n}, above the cap {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("poset has no unique {0}")]
    Unbounded(&'static str),

    #[error("{0} is not a vertex of the complex")]
    NotAVertex(String),

    #[error("complex is not pure")]
    NotPure,

    #[error("face {0} is not in the complex")]
    FaceNotInComplex(String),

    #[error("invalid ordered set partition: {0}")]
    InvalidOrderedPartition(String),

    #[error("invalid pointed set partition: {0}")]
    InvalidPointedPartition(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matching is not an involution at {0}")]
    NotInvolution(String),

    #[error("theorem check failed: {0}")]
    TheoremViolation(String),

    #[error("not a partial order: {0}")]
    NotAPoset(String),

    #[error("family of faces is not closed under taking faces: {0} is missing")]
    NotClosed(String),

    #[error("parse error: {0}")]
    Parse(String),
}
