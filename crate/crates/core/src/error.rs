use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("prime {prime:?} is not cofinite: variable x{var} is not nilpotent in the localization")]
    NotPCofinite { prime: Vec<usize>, var: usize },

    #[error("localization at {prime:?} has a free unit direction (stabilizer of positive corank); only finite fibers are supported")]
    UnsupportedUnitRank { prime: Vec<usize> },

    #[error("ideal is not binomial: {0}")]
    NotBinomial(String),

    #[error("monomial lies in the localized ideal (nil class)")]
    NilClass,

    #[error("congruence or ideal is not coprincipal: {0}")]
    NotCoprincipal(String),

    #[error("field lacks the required roots of unity of order {0}")]
    FieldExtensionRequired(u64),

    #[error("characteristic divides the lattice index {0}")]
    BadCharacteristic(u64),

    #[error("witness enumeration did not certify within {rounds} rounds: {detail}")]
    BoundExceeded { rounds: usize, detail: String },

    #[error("closure algorithms disagree: {0}")]
    CrossCheckMismatch(String),

    #[error("rendering supports two variables only, got {0}")]
    DimensionUnsupported(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
