use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("rank mismatch: expected rank {expected}, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("group mismatch: {0}")]
    SpecMismatch(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The parameter tuple does not define an automorphism. `condition`
    /// names the first failed requirement, e.g. `"(d)"` or `"relation alpha*e2"`.
    #[error("invalid automorphism: condition {condition} fails ({detail})")]
    InvalidAutomorphism { condition: String, detail: String },

    #[error("subgroup for moduli {moduli:?} is not normal: {reason}")]
    NonNormalSubgroup { moduli: Vec<u64>, reason: String },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("golden data: {0}")]
    Golden(String),
}

pub type Result<T> = std::result::Result<T, Error>;
