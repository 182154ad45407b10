use std::time::Instant;

use serde::Serialize;

use crate::oracle::{IndependenceOracle, ValueOracle};
use crate::scalar::Scalar;
use crate::sets::ElementSet;

/// Outcome of one solver invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult<T> {
    pub algorithm: String,
    pub solution: ElementSet,
    /// `f(solution)` as last evaluated.
    pub value: T,
    pub f_evals: u64,
    pub marginal_evals: u64,
    pub independence_checks: u64,
    pub wall_ms: f64,
    pub seed: Option<u64>,
}

/// Counter snapshot taken at the start of a solve; the result carries deltas.
pub(crate) struct Meter {
    started: Instant,
    f_evals: u64,
    marginal_evals: u64,
    independence_checks: u64,
}

impl Meter {
    pub(crate) fn start<T: Scalar>(f: &ValueOracle<'_, T>, ind: Option<&IndependenceOracle<'_>>) -> Self {
        let counts = f.counts();
        Self {
            started: Instant::now(),
            f_evals: counts.f_evals,
            marginal_evals: counts.marginal_evals,
            independence_checks: ind.map_or(0, |i| i.checks()),
        }
    }

    pub(crate) fn finish<T: Scalar>(
        self,
        algorithm: &str,
        f: &ValueOracle<'_, T>,
        ind: Option<&IndependenceOracle<'_>>,
        solution: ElementSet,
        value: T,
        seed: Option<u64>,
    ) -> SolveResult<T> {
        let counts = f.counts();
        SolveResult {
            algorithm: algorithm.to_string(),
            solution,
            value,
            f_evals: counts.f_evals - self.f_evals,
            marginal_evals: counts.marginal_evals - self.marginal_evals,
            independence_checks: ind.map_or(0, |i| i.checks()) - self.independence_checks,
            wall_ms: self.started.elapsed().as_secs_f64() * 1e3,
            seed,
        }
    }
}
