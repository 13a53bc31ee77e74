use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid phase: {0}")]
    InvalidPhase(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("matrix is not Hadamard: rows {i} and {j} are not orthogonal")]
    NotHadamard { i: usize, j: usize },

    #[error("matrix must be dephased (first row and column all ones)")]
    NotDephased,

    #[error("matrix must be real (entries +1/-1 only)")]
    NotReal,

    #[error("matrix must be symmetric")]
    NotSymmetric,

    #[error("bad dimension: {0}")]
    Dimension(String),

    #[error("bad argument: {0}")]
    Argument(String),

    #[error("not a conference matrix: {0}")]
    NotConference(String),

    #[error("{q} is not an odd prime")]
    NotOddPrime { q: u64 },

    #[error("unknown catalogue id: {0}")]
    UnknownCatalogueId(String),

    #[error("rows {r} and {s} are not a suitable pair: {reason}")]
    UnsuitablePair { r: usize, s: usize, reason: String },

    #[error("family fails the orthogonality check at rows {i} and {j}")]
    FamilyNotHadamard { i: usize, j: usize },
}
