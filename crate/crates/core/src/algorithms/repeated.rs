use serde::Serialize;

use super::greedy::greedy;
use super::unconstrained::{unconstrained_max_det, unconstrained_max_rand, UnconstrainedMethod};
use crate::error::{Error, Result};
use crate::oracle::{IndependenceOracle, ValueOracle};
use crate::result::{Meter, SolveResult};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::sets::ElementSet;

/// Number of greedy rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ell {
    Fixed(usize),
    /// `⌈√k⌉` from the oracle's declared `k`.
    Auto,
}

impl Ell {
    pub fn resolve(self, k: usize) -> Result<usize> {
        match self {
            Ell::Fixed(0) => Err(Error::Domain("ell must be at least 1".into())),
            Ell::Fixed(ell) => Ok(ell),
            Ell::Auto => Ok(ceil_sqrt(k.max(1))),
        }
    }
}

impl std::str::FromStr for Ell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(Ell::Auto);
        }
        s.parse::<usize>()
            .map(Ell::Fixed)
            .map_err(|_| Error::Parse(format!("ell must be a positive integer or `auto`, got `{s}`")))
    }
}

impl std::fmt::Display for Ell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ell::Fixed(ell) => write!(f, "{ell}"),
            Ell::Auto => f.write_str("auto"),
        }
    }
}

fn ceil_sqrt(k: usize) -> usize {
    let mut ell = (k as f64).sqrt() as usize;
    while ell * ell < k {
        ell += 1;
    }
    while ell > 1 && (ell - 1) * (ell - 1) >= k {
        ell -= 1;
    }
    ell
}

/// Guaranteed fraction of `f(OPT)`: `(ℓ−1) / ((k+1)ℓ + (α/2)ℓ(ℓ−1))`.
pub fn repeated_greedy_bound(k: usize, ell: usize, alpha: f64) -> f64 {
    let (k, ell) = (k as f64, ell as f64);
    (ell - 1.0) / ((k + 1.0) * ell + alpha / 2.0 * ell * (ell - 1.0))
}

/// The two candidate sets produced by one round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Round<T> {
    pub greedy: ElementSet,
    pub greedy_value: T,
    pub unconstrained: ElementSet,
    pub unconstrained_value: T,
}

#[derive(Debug, Clone)]
pub struct RepeatedOutcome<T> {
    pub result: SolveResult<T>,
    pub ell: usize,
    pub k: usize,
    pub method: UnconstrainedMethod,
    /// Guaranteed fraction of `f(OPT)` implied by `k`, `ℓ` and the subroutine's `α`.
    pub bound: f64,
    pub rounds: Vec<Round<T>>,
}

/// Repeated greedy over `candidates`.
///
/// Round `i` runs greedy on the remaining ground set to get `S_i`, runs the
/// unconstrained subroutine on `S_i` to get `S'_i`, and removes `S_i` from
/// the ground set. Returns the best of all `2ℓ` sets, earliest on ties with
/// `S_i` ahead of `S'_i`. The randomized subroutine needs `rng`.
pub fn repeated_greedy<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
    ell: Ell,
    method: UnconstrainedMethod,
    mut rng: Option<&mut Rng>,
    lazy: bool,
) -> Result<RepeatedOutcome<T>> {
    let k = ind.k();
    let ell = ell.resolve(k)?;
    if method == UnconstrainedMethod::Rand && rng.is_none() {
        return Err(Error::Precondition("randomized subroutine requires a seed".into()));
    }
    let meter = Meter::start(f, Some(ind));
    let seed = rng.as_ref().map(|r| r.master_seed());
    let mut remaining = candidates.clone();
    let mut rounds = Vec::with_capacity(ell);
    let mut best: Option<(ElementSet, T)> = None;
    let mut consider = |set: &ElementSet, value: T| match &best {
        Some((_, v)) if value <= *v => {}
        _ => best = Some((set.clone(), value)),
    };
    for _ in 0..ell {
        let g = greedy(f, ind, &remaining, lazy)?.result;
        let u = match method {
            UnconstrainedMethod::Det => unconstrained_max_det(f, &g.solution)?,
            UnconstrainedMethod::Rand => {
                unconstrained_max_rand(f, &g.solution, rng.as_deref_mut().expect("checked above"))?
            }
        };
        consider(&g.solution, g.value);
        consider(&u.solution, u.value);
        remaining = remaining.difference(&g.solution);
        rounds.push(Round {
            greedy: g.solution,
            greedy_value: g.value,
            unconstrained: u.solution,
            unconstrained_value: u.value,
        });
    }
    let (solution, value) = best.expect("ell >= 1 yields candidates");
    Ok(RepeatedOutcome {
        result: meter.finish("repeated-greedy", f, Some(ind), solution, value, seed),
        ell,
        k,
        method,
        bound: repeated_greedy_bound(k, ell, method.alpha()),
        rounds,
    })
}
