use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular")]
    Singular,

    #[error("inadmissible dimension parameter: {0}")]
    Dimension(String),

    #[error("invalid automorphism parameters: {0}")]
    Param(String),

    #[error("matrix is not in the family: {0}")]
    NotInFamily(String),

    #[error("subspace is not closed under the bracket: {0}")]
    NotClosed(String),

    #[error("matrix is not a derivation")]
    NotDerivation,

    #[error("matrix is not nilpotent; exact exponential is unavailable")]
    NotNilpotent,

    #[error("constraint system is inconsistent: {0}")]
    Inconsistency(String),

    #[error("unresolved residual constraints after replay: {0}")]
    Residual(String),

    #[error("missing variable in assignment: {0}")]
    MissingVariable(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
