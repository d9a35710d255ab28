use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("factorization budget of {budget} steps exceeded while splitting {n}")]
    FactorizationBudgetExceeded { n: String, budget: u64 },
    #[error("needs more digits: have {have}, need {need}")]
    NeedsMoreDigits { have: u64, need: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
