use num_bigint::BigInt;
use thiserror::Error;

/// Errors surfaced by the library.
///
/// `InvariantViolation` is reserved for conditions the underlying theory
/// rules out; seeing one means a bug, not bad input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("weight matrix is not faithful: invariant factors {0:?} (expected all 1); effectivize first")]
    NotFaithful(Vec<BigInt>),

    #[error("weight matrix is not 1-modular: dropping column {witness_column} lowers the rank")]
    NotOneModular { witness_column: usize },

    #[error("module is not stable: column {failing_column} admits no nonnegative relation")]
    NotStable { failing_column: usize },

    #[error("matrix shape mismatch: {0}")]
    Shape(String),

    #[error("zero vector has no primitive generator")]
    ZeroVector,

    #[error("malformed type-O certificate: {0}")]
    MalformedCertificate(String),

    #[error(
        "reduction step produces a disconnected symmetry group: {0}; this quotient has no \
         presentation by cyclic factors and a torus block, which is outside the supported scope"
    )]
    DisconnectedReduction(String),

    #[error("isomorphism test requires minimal (reduced) input: {0}")]
    NonMinimal(String),

    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
