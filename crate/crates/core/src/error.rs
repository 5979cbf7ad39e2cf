//! Error type shared by every module in the crate.

use num_bigint::BigInt;
use thiserror::Error;

/// Everything that can go wrong when validating inputs or running a search.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Gram matrix is not square (or is empty).
    #[error("gram matrix must be square and nonempty")]
    NotSquare,

    /// Gram matrix is not symmetric.
    #[error("gram matrix must be symmetric")]
    NotSymmetric,

    /// Determinant is not ±1, so the form is not unimodular.
    #[error("gram matrix must be unimodular, got determinant {det}")]
    NotUnimodular { det: BigInt },

    /// A vector has the wrong number of coordinates for the lattice.
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation that needs a nonzero class received zero.
    #[error("class vector must be nonzero")]
    ZeroVector,

    /// Division by a zero self-intersection.
    #[error("class must have nonzero square")]
    ZeroSquare,

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The search hit its node or pairing budget before finishing.
    /// `last_pairing` is the pairing value being tested when the budget ran out.
    #[error("search budget exhausted after {nodes} nodes (last pairing tried: {last_pairing:?})")]
    BudgetExhausted {
        nodes: u64,
        last_pairing: Option<BigInt>,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
