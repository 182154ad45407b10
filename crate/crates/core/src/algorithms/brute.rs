use crate::constraints::for_each_independent;
use crate::error::{Error, Result};
use crate::oracle::{IndependenceOracle, Unconstrained, ValueOracle};
use crate::result::{Meter, SolveResult};
use crate::scalar::Scalar;
use crate::sets::ElementSet;

pub const BRUTE_FORCE_LIMIT: usize = 22;

/// Exact maximum of `f` over the independent subsets of `candidates`.
///
/// Depth-first enumeration that abandons a branch at the first dependent set.
/// Ties keep the first set met in lexicographic order.
pub fn brute_force_opt<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
) -> Result<SolveResult<T>> {
    if candidates.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::Capacity {
            what: "brute_force_opt",
            limit: BRUTE_FORCE_LIMIT,
            n: candidates.len(),
        });
    }
    let meter = Meter::start(f, Some(ind));
    let mut best: Option<(ElementSet, T)> = None;
    for_each_independent(ind, candidates.as_slice(), |s| {
        let v = f.evaluate(s)?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((s.clone(), v));
        }
        Ok(())
    })?;
    let (solution, value) = best.expect("the empty set is always visited");
    Ok(meter.finish("brute-force", f, Some(ind), solution, value, None))
}

/// Exact unconstrained maximum of `f` over subsets of `universe`.
pub fn brute_force_unconstrained<T: Scalar>(f: &ValueOracle<'_, T>, universe: &ElementSet) -> Result<SolveResult<T>> {
    let ind = IndependenceOracle::new(&Unconstrained);
    brute_force_opt(f, &ind, universe)
}
