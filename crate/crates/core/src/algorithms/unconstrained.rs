//! Double greedy for unconstrained submodular maximization over a subset `U`.

use crate::error::Result;
use crate::oracle::ValueOracle;
use crate::result::{Meter, SolveResult};
use crate::rng::Rng;
use crate::scalar::{max_of, Scalar};
use crate::sets::ElementSet;

/// Which unconstrained subroutine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnconstrainedMethod {
    /// Deterministic double greedy, ratio 3.
    Det,
    /// Randomized double greedy, ratio 2 in expectation.
    Rand,
}

impl UnconstrainedMethod {
    /// Approximation ratio `α` of the subroutine.
    pub fn alpha(self) -> f64 {
        match self {
            Self::Det => 3.0,
            Self::Rand => 2.0,
        }
    }
}

impl std::str::FromStr for UnconstrainedMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" | "deterministic" => Ok(Self::Det),
            "rand" | "randomized" => Ok(Self::Rand),
            other => Err(crate::Error::Parse(format!("unknown subroutine `{other}`"))),
        }
    }
}

/// Deterministic double greedy over `universe` in ascending id order.
///
/// Keeps `X = ∅` and `Y = U`; for each `u`, `a = f(X+u) − f(X)` and
/// `b = f(Y−u) − f(Y)`; `u` joins `X` when `a >= b` and leaves `Y` otherwise.
pub fn unconstrained_max_det<T: Scalar>(f: &ValueOracle<'_, T>, universe: &ElementSet) -> Result<SolveResult<T>> {
    let meter = Meter::start(f, None);
    let (x, fx) = double_greedy(f, universe, |a, b| Ok(a >= b))?;
    Ok(meter.finish("double-greedy", f, None, x, fx, None))
}

/// Randomized double greedy: keeps `u` with probability
/// `max(a,0) / (max(a,0) + max(b,0))`, and surely when both are zero.
/// Consumes exactly one draw per element of `universe`.
pub fn unconstrained_max_rand<T: Scalar>(
    f: &ValueOracle<'_, T>,
    universe: &ElementSet,
    rng: &mut Rng,
) -> Result<SolveResult<T>> {
    let meter = Meter::start(f, None);
    let (x, fx) = double_greedy(f, universe, |a, b| {
        let a = max_of(a, T::zero()).to_f64();
        let b = max_of(b, T::zero()).to_f64();
        let p = if a + b == 0.0 { 1.0 } else { a / (a + b) };
        rng.bernoulli(p)
    })?;
    Ok(meter.finish("double-greedy-rand", f, None, x, fx, Some(rng.master_seed())))
}

fn double_greedy<T: Scalar, D>(f: &ValueOracle<'_, T>, universe: &ElementSet, mut keep: D) -> Result<(ElementSet, T)>
where
    D: FnMut(T, T) -> Result<bool>,
{
    let mut x = ElementSet::new();
    let mut y = universe.clone();
    let mut fx = f.evaluate(&x)?;
    let mut fy = f.evaluate(&y)?;
    for u in universe.iter() {
        let add = f.marginal_with_base(u, &x, fx)?;
        let drop = f.removal_marginal_with_base(u, &y, fy)?;
        if keep(add.gain, drop.gain)? {
            x.insert(u);
            fx = add.value_after;
        } else {
            y.remove(u);
            fy = drop.value_after;
        }
    }
    debug_assert_eq!(x, y);
    Ok((x, fx))
}
