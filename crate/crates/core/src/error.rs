use thiserror::Error;

use crate::verdict::CriterionVerdict;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range (2..=2^31)")]
    NotPrime(u64),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("requested precision p^{requested} exceeds the function depth {depth}")]
    DepthExceeded { requested: u32, depth: u32 },

    #[error("depth {depth} exceeds the configured maximum {max} (PADIC_DYN_MAX_DEPTH)")]
    DepthLimit { depth: u32, max: u32 },

    #[error("a table of p^{exponent} entries for p = {prime} is too large")]
    TableTooLarge { prime: u64, exponent: u32 },

    #[error("not 1-Lipschitz: {0}")]
    NotLipschitz(String),

    #[error("not uniformly differentiable modulo p: {}", .0.summary())]
    NotUd1(Box<CriterionVerdict>),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("series has {have} terms, {needed} are required")]
    InsufficientLength { needed: usize, have: usize },

    #[error("coefficient {index} is not divisible by p^{required}")]
    NotExact { index: usize, required: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
