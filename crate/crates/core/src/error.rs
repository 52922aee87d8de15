use thiserror::Error;

/// Errors raised when constructing or combining algebraic objects.
///
/// Every invariant violation is reported as a value; nothing in the crate
/// panics on malformed input coming through a public constructor.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range 2..=251")]
    NotPrime(u32),

    #[error("dimension mismatch in {op}: {detail}")]
    DimensionMismatch { op: &'static str, detail: String },

    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u8, right: u8 },

    #[error("objects live over different algebras")]
    AlgebraMismatch,

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("map is not A-linear: fails to commute with the action of basis element {0}")]
    NotLinear(String),

    #[error("structure map is not semilinear at basis element {0}")]
    NotSemilinear(String),

    #[error("map is not compatible with the structure maps")]
    NotCompatible,

    #[error("subspace is not stable: {0}")]
    NotStable(String),

    #[error("complex is invalid: {0}")]
    InvalidComplex(String),

    #[error("the Frobenius endomorphism of {0} is not invertible")]
    FrobeniusNotInvertible(String),

    #[error("size guard exceeded: {0}")]
    Guard(String),

    #[error("perversity rejected: {0}")]
    PerversityRejected(String),
}

pub type Result<T> = std::result::Result<T, Error>;
