use thiserror::Error;

/// Errors raised by the algebra kernel, the transform pipeline and the
/// numeric evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("no annihilating polynomial within degree bounds {0:?}")]
    BoundsTooSmall((usize, usize, usize)),

    #[error("ambiguous relation: independent minimal solutions {first} and {second}")]
    AmbiguousRelation { first: String, second: String },

    #[error("series of order {have} is too short, order {needed} required")]
    InsufficientOrder { have: usize, needed: usize },

    #[error("branch seed does not annihilate relation: {0}")]
    BranchMismatch(String),

    #[error("elimination failure: {0}")]
    EliminationFailure(String),

    #[error("degenerate branch: linear solvability coefficient vanishes at order {order}")]
    DegenerateBranch { order: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("state-count limit exceeded after completing step {last_completed}")]
    ResourceLimit { last_completed: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that indicate an arithmetic or invariant bug rather
    /// than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Internal(_)
                | Error::BranchMismatch(_)
                | Error::EliminationFailure(_)
                | Error::AmbiguousRelation { .. }
                | Error::DegenerateBranch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
