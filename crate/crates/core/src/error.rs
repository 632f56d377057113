use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {requested} subsets requested, budget is {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },
    #[error("refused by the {rule}: {message}")]
    Refused { rule: String, message: String },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("cospectrality criteria disagree: {0}")]
    CriteriaDisagree(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
