use thiserror::Error;

use crate::sets::ElementId;

/// Errors raised by oracles, verifiers and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An argument was outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exhaustive routine refused an instance that is too large.
    #[error("capacity exceeded: {what} supports n <= {limit}, got n = {n}; use a sampling check instead")]
    Capacity {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    /// The value oracle returned a negative number.
    #[error("non-negativity violated: f({set:?}) = {value}")]
    NegativeValue { set: Vec<ElementId>, value: f64 },

    /// A set expected to be independent was rejected by the constraint.
    #[error("infeasible set: {0:?}")]
    Infeasible(Vec<ElementId>),

    /// A diagnostic invariant failed during an instrumented run.
    #[error("invariant {property} violated at iteration {iteration}: {detail}")]
    Invariant {
        property: &'static str,
        iteration: usize,
        detail: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors that originate in an oracle rather than in configuration.
    pub fn is_oracle_violation(&self) -> bool {
        matches!(
            self,
            Error::NegativeValue { .. } | Error::Infeasible(_) | Error::Invariant { .. }
        )
    }
}
