use thiserror::Error;

/// Errors raised by group construction, lattice enumeration and classification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("budget exceeded: {what} is {actual}, limit {limit}")]
    Budget {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("subgroup is not normal: conjugating {member} by {by} leaves the subgroup")]
    NotNormal { member: usize, by: usize },

    #[error("bonding map {index} is not surjective")]
    NotSurjective { index: usize },

    #[error("group mismatch: {0}")]
    Mismatch(String),

    #[error("contradictory certificates: {0}")]
    Certificates(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn budget(what: &'static str, actual: impl Into<u128>, limit: impl Into<u128>) -> Self {
        Error::Budget {
            what,
            actual: actual.into(),
            limit: limit.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
