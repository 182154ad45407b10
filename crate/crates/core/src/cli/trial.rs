//! Running one algorithm on one problem and turning results into report lines.

use crate::algorithms::{
    brute_force_opt, greedy, repeated_greedy, sample_greedy, sample_greedy_linear, unconstrained_max_det,
    unconstrained_max_rand, Ell, Linearity, UnconstrainedMethod,
};
use crate::error::{Error, Result};
use crate::objectives::CHECK_LIMIT;
use crate::oracle::ValueOracle;
use crate::result::SolveResult;
use crate::rng::Rng;
use crate::Value;

use super::problem::Problem;
use super::report::TrialReport;
use super::spec::SweepParam;
use super::{AlgArgs, Algorithm};

/// Algorithm parameters shared by every run of a command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgParams {
    pub ell: Ell,
    pub p: Option<f64>,
    pub subroutine: UnconstrainedMethod,
    pub lazy: bool,
}

impl AlgParams {
    pub fn from_args(args: &AlgArgs) -> Self {
        Self { ell: args.ell, p: args.p, subroutine: args.subroutine, lazy: args.lazy }
    }

    pub fn with_sweep(mut self, param: SweepParam, value: f64) -> Self {
        match param {
            SweepParam::Ell => self.ell = Ell::Fixed(value as usize),
            SweepParam::P => self.p = Some(value),
            _ => {}
        }
        self
    }
}

fn need_rng(rng: &mut Option<Rng>, alg: Algorithm) -> Result<&mut Rng> {
    rng.as_mut()
        .ok_or_else(|| Error::Precondition(format!("{} needs a seed", alg.name())))
}

/// One run on the stream `(seed, stream)`. Returns the result and the number
/// of rounds for repeated greedy. The output is checked against the
/// constraint; an infeasible solution is an oracle violation.
pub fn run_trial(
    problem: &Problem,
    alg: Algorithm,
    params: &AlgParams,
    seed: Option<u64>,
    stream: u64,
) -> Result<(SolveResult<Value>, Option<usize>)> {
    let objective = problem.objective()?;
    let f = ValueOracle::new(objective);
    let ind = problem.independence();
    let universe = &problem.universe;
    let mut rng = seed.map(|s| Rng::new(s, stream));
    let (mut result, ell) = match alg {
        Algorithm::Greedy => (greedy(&f, &ind, universe, params.lazy)?.result, None),
        Algorithm::RepeatedGreedy => {
            let rng = match params.subroutine {
                UnconstrainedMethod::Rand => Some(need_rng(&mut rng, alg)?),
                UnconstrainedMethod::Det => None,
            };
            let out = repeated_greedy(&f, &ind, universe, params.ell, params.subroutine, rng, params.lazy)?;
            (out.result, Some(out.ell))
        }
        Algorithm::SampleGreedy => (
            sample_greedy(&f, &ind, universe, problem.k, need_rng(&mut rng, alg)?, params.p, params.lazy)?,
            None,
        ),
        Algorithm::SampleGreedyLinear => {
            let linearity = if problem.linear {
                Linearity::Attested
            } else if problem.n <= CHECK_LIMIT {
                Linearity::Verify
            } else {
                return Err(Error::Precondition(
                    "sample-greedy-linear needs a modular objective or n <= 14 to verify linearity".into(),
                ));
            };
            (
                sample_greedy_linear(&f, &ind, universe, problem.k, need_rng(&mut rng, alg)?, linearity, params.lazy)?,
                None,
            )
        }
        Algorithm::DoubleGreedy => (
            match params.subroutine {
                UnconstrainedMethod::Det => unconstrained_max_det(&f, universe)?,
                UnconstrainedMethod::Rand => unconstrained_max_rand(&f, universe, need_rng(&mut rng, alg)?)?,
            },
            None,
        ),
        Algorithm::BruteForce => (brute_force_opt(&f, &ind, universe)?, None),
    };
    if !ind.uncounted_is_independent(&result.solution) {
        return Err(Error::Infeasible(result.solution.into_vec()));
    }
    if !alg.is_randomized(params.subroutine) {
        result.seed = None;
    }
    Ok((result, ell))
}

/// Labels shared by all report lines of one benchmark point.
pub struct LineContext<'a> {
    pub config_hash: &'a str,
    pub sweep_value: Option<serde_json::Value>,
    pub timing: bool,
}

fn to_report(problem: &Problem, result: SolveResult<Value>, ell: Option<usize>, stream: u64, ctx: &LineContext<'_>) -> TrialReport {
    TrialReport {
        algorithm: result.algorithm,
        seed: result.seed,
        trial_index: stream,
        n: problem.n,
        r: problem.r,
        k: problem.k,
        ell,
        value: result.value,
        f_evals: result.f_evals,
        marginal_evals: result.marginal_evals,
        independence_checks: result.independence_checks,
        wall_ms: ctx.timing.then_some(result.wall_ms),
        solution: result.solution.into_vec(),
        config_hash: ctx.config_hash.to_string(),
        sweep_value: ctx.sweep_value.clone(),
    }
}

/// Trial `t` of a randomized algorithm: streams `t·best_of ..` and, when
/// `best_of > 1`, a `max-<alg>` line copying the best run (earliest on ties)
/// with counters summed over the group. Deterministic algorithms run once.
pub fn run_group(
    problem: &Problem,
    alg: Algorithm,
    params: &AlgParams,
    seed: Option<u64>,
    trial: u64,
    best_of: usize,
    ctx: &LineContext<'_>,
) -> Result<Vec<TrialReport>> {
    if !alg.is_randomized(params.subroutine) {
        let (result, ell) = run_trial(problem, alg, params, None, 0)?;
        return Ok(vec![to_report(problem, result, ell, 0, ctx)]);
    }
    let first = trial * best_of as u64;
    let mut lines = Vec::with_capacity(best_of + 1);
    for stream in first..first + best_of as u64 {
        let (result, ell) = run_trial(problem, alg, params, seed, stream)?;
        lines.push(to_report(problem, result, ell, stream, ctx));
    }
    if best_of > 1 {
        let best = lines
            .iter()
            .fold(&lines[0], |best, line| if line.value > best.value { line } else { best });
        let mut max = best.clone();
        max.algorithm = format!("max-{}", alg.name());
        max.f_evals = lines.iter().map(|l| l.f_evals).sum();
        max.marginal_evals = lines.iter().map(|l| l.marginal_evals).sum();
        max.independence_checks = lines.iter().map(|l| l.independence_checks).sum();
        max.wall_ms = lines.iter().map(|l| l.wall_ms).sum();
        lines.push(max);
    }
    Ok(lines)
}

/// All groups of one algorithm at one point, in trial order.
#[allow(clippy::too_many_arguments)]
pub fn run_point(
    problem: &Problem,
    alg: Algorithm,
    params: &AlgParams,
    seed: Option<u64>,
    trials: usize,
    best_of: usize,
    config_hash: &str,
    sweep_value: Option<serde_json::Value>,
    timing: bool,
) -> Result<Vec<TrialReport>> {
    let ctx = LineContext { config_hash, sweep_value, timing };
    let trials = if alg.is_randomized(params.subroutine) { trials } else { 1 };
    let mut lines = Vec::new();
    for t in 0..trials as u64 {
        lines.extend(run_group(problem, alg, params, seed, t, best_of, &ctx)?);
    }
    Ok(lines)
}
