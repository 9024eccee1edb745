use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("variables {i} and {j} coincide (use a geometric specialization or perturb)")]
    Coincident { i: usize, j: usize },
    #[error("singular denominator: {0}")]
    Singular(String),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("contour check failed: {0}")]
    Contour(String),
    #[error("truncation box too small: {0}")]
    Truncation(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
