use thiserror::Error;

use crate::graph::VertexId;

/// Every failure the calculus can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex id {0} is used twice")]
    DuplicateId(VertexId),
    #[error("edge endpoint {0} is not a vertex")]
    UnknownEndpoint(VertexId),
    #[error("self-loop at vertex {0}: components of an snc divisor are smooth")]
    SelfLoop(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge between {0} and {1}")]
    UnknownEdge(VertexId, VertexId),
    #[error("the selection is not a forest")]
    NotAForest,
    #[error("the selection is not a chain")]
    NotAChain,
    #[error("vertex {0} is not a (-1)-curve")]
    NotMinusOne(VertexId),
    #[error("vertex {0} meets too many components")]
    TooBranched(VertexId),
    #[error("contracting {0} would leave a non-snc divisor")]
    NotSnc(VertexId),
    #[error("vertex {0} is not a 0-curve")]
    NotZeroCurve(VertexId),
    #[error("chain of type {0:?} has no standard form")]
    NoStandardForm(Vec<i64>),
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("not a fiber: {0}")]
    NotAFiber(String),
    #[error("fibration model is inconsistent: {0}")]
    ModelInconsistent(String),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("expected n > m, got n = {0}, m = {1}")]
    BadOrder(u64, u64),
    #[error("the closure meets the line at infinity transversally (a line)")]
    Transversal,
    #[error("pipeline invariant violated: {0}")]
    PipelineInvariantViolation(String),
    #[error("boundary discriminant is zero")]
    ZeroBoundaryDiscriminant,
    #[error("exceptional discriminant must be positive, got {0}")]
    NonPositiveExceptional(String),
    #[error("model is not in the smooth-curve case (U is nonempty)")]
    NotSmoothCase,
}

pub type Result<T> = std::result::Result<T, Error>;
