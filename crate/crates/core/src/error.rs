//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element does not belong to {group}")]
    DescriptorMismatch { group: String },

    #[error("coordinate overflow in {op}")]
    Overflow { op: &'static str },

    #[error("level overflow: requested level {requested}, chain supports at most {max}")]
    LevelOverflow { requested: usize, max: usize },

    #[error("budget of {limit} elements exceeded{}", lower_bound.map(|b| format!(" (value is at least {b})")).unwrap_or_default())]
    BudgetExceeded {
        limit: usize,
        lower_bound: Option<u64>,
    },

    #[error("parse error at position {position}: expected {expected}")]
    Parse { position: usize, expected: String },

    #[error("construction failed at level {level}: {reason}")]
    Construction { level: usize, reason: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("coarse structure violated: {0}")]
    NotCoarse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn overflow(op: &'static str) -> Self {
        Error::Overflow { op }
    }

    /// Budget and configuration problems, as opposed to failed verifications.
    pub fn is_budget_or_config(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::Parse { .. }
                | Error::Invalid(_)
                | Error::LevelOverflow { .. }
                | Error::Unsupported(_)
                | Error::DescriptorMismatch { .. }
        )
    }
}
