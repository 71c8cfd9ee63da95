use thiserror::Error;

use crate::dsl::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("antisymmetry violated: {0} < {1} and {1} < {0}")]
    Cycle(String, String),
    #[error("transitivity violated: {0} < {1} and {1} < {2} but not {0} < {2}")]
    Transitivity(String, String, String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("too many elements: {0} (limit {1})")]
    TooLarge(usize, usize),
    #[error("algebra is not generated by its closed members")]
    NotGeneratedByClosed,
    #[error("algebra is not closed under the derived-set operator")]
    NotATba,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
    #[error("type is not an upper set")]
    NotUpper,
    #[error("missing count for discrete minimal element `{0}`")]
    MissingCount(String),
    #[error("count for `{0}` exceeds its discrete budget {1}")]
    BudgetExceeded(String, u32),
    #[error("`{1}` is not above `{0}`")]
    NotAbove(String, String),
    #[error("zero measure has no trim partition")]
    ZeroMeasure,
    #[error("inconsistent measures: {0}")]
    Inconsistent(String),
    #[error("system is not countably categorical: {0}")]
    NotCategorical(String),
    #[error("measure mismatch: {0}")]
    MeasureMismatch(String),
    #[error("cell {0} is not compact")]
    NonCompactCell(usize),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("split could not be realised: {0}")]
    SplitFailed(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
