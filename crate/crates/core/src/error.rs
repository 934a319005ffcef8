use thiserror::Error;

use crate::ring::VarId;

/// Errors raised by the engine.
///
/// Mathematical refutations are never errors: they are carried in
/// certificates and morphism statuses. An `Error` means the request was
/// malformed, a resource cap was hit, or the engine detected an internal
/// inconsistency.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable {0} has no assigned value")]
    UnassignedVariable(VarId),

    #[error("{what} index {index} out of range (bound {bound})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("{what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("product e{i} * e{j} has a component on e{k} of the wrong grade")]
    GradingIncompatible { i: usize, j: usize, k: usize },

    #[error("involution invalid: {reason} (witness {witness:?})")]
    InvolutionInvalid {
        reason: &'static str,
        witness: (usize, usize),
    },

    #[error("algebra has no involution")]
    MissingInvolution,

    #[error("not graded: {0}")]
    NotGraded(String),

    #[error("generators are linearly dependent (rank {rank} < {count})")]
    DependentGenerators { rank: usize, count: usize },

    #[error(
        "parts are not complementary: dim0 = {dim0}, dim1 = {dim1}, rank of union = {rank}, parent dim = {parent_dim}"
    )]
    NotComplementary {
        dim0: usize,
        dim1: usize,
        rank: usize,
        parent_dim: usize,
    },

    #[error("representation fails the bracket relation on basis pair {witness:?}")]
    RepresentationInvalid { witness: (usize, usize) },

    #[error("section is not a right inverse of the projection on basis vector {basis}")]
    SectionInvalid { basis: usize },

    #[error("{what} is not closed under the product (witness pair {witness:?})")]
    NotClosed {
        what: &'static str,
        witness: (usize, usize),
    },

    #[error("vector is not in the span of the given basis")]
    NotInSpan,

    #[error("forms live over different algebras or generator counts")]
    ContextMismatch,

    #[error("parenthesization has {found} leaves, expected {expected}")]
    LeafMismatch { expected: usize, found: usize },

    #[error(
        "enumerating all parenthesizations of {factors} factors exceeds the cap of {cap}; use the right-nested policy"
    )]
    ParenEnumerationCap { factors: usize, cap: usize },

    #[error("resource cap exceeded: {resource} limit {limit}, estimated {estimate}")]
    ResourceCap {
        resource: &'static str,
        limit: u64,
        estimate: u64,
    },

    #[error("modular evaluation unsupported: {0}")]
    ModularUnsupported(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("soundness violation: {0}")]
    Soundness(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }

    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
