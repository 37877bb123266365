use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("rank {0} unsupported (1..=16)")]
    RankUnsupported(usize),
    #[error("form has a term outside the top bidegree: {0}")]
    NotTopDegree(String),
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("form is not real")]
    NotReal,
    #[error("presentation is not integrable: {0}")]
    NotIntegrable(String),
    #[error("presentation is not complex-parallelizable: {0}")]
    NotParallelizable(String),
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
