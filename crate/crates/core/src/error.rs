use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the cut-off toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid score matrix: {0}")]
    InvalidMatrix(String),

    #[error(
        "cut index {index} for score {score} is not valid (out of range or splits a tie group)"
    )]
    InvalidCutIndex { score: usize, index: usize },

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("distinguishability is undefined for n = {n} (need at least two items)")]
    UndefinedMetric { n: usize },

    #[error("search requires {required} grid evaluations, exceeding the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("subset bucketing supports at most {max} scores, got {m}")]
    SubsetCapacity { m: usize, max: usize },

    #[error("item subset must not be empty")]
    EmptySubset,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("covariance matrix stayed singular after {attempts} attempts")]
    DegenerateCovariance { attempts: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by exceeding a solver or histogram capacity.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. } | Error::SubsetCapacity { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
