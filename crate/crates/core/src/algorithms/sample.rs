use super::greedy::greedy;
use crate::error::{Error, Result};
use crate::objectives::check_modular;
use crate::oracle::{IndependenceOracle, ValueOracle};
use crate::result::{Meter, SolveResult};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::sets::{ElementSet, GroundSet};

/// Sample-then-greedy.
///
/// Each candidate, in ascending id order, enters the sample with probability
/// `p` (default `1/(k+1)`, one draw per candidate); greedy then runs on the
/// sample. The constraint is restricted by only ever querying subsets of the
/// sample.
pub fn sample_greedy<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
    k: usize,
    rng: &mut Rng,
    probability_override: Option<f64>,
    lazy: bool,
) -> Result<SolveResult<T>> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let p = probability_override.unwrap_or(1.0 / (k as f64 + 1.0));
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("sampling probability {p} outside (0, 1]")));
    }
    let meter = Meter::start(f, Some(ind));
    let mut sample = ElementSet::new();
    for u in candidates.iter() {
        if rng.bernoulli(p)? {
            sample.insert(u);
        }
    }
    let inner = greedy(f, ind, &sample, lazy)?.result;
    Ok(meter.finish("sample-greedy", f, Some(ind), inner.solution, inner.value, Some(rng.master_seed())))
}

/// How [`sample_greedy_linear`] establishes that the objective is linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linearity {
    /// The caller vouches for it (e.g. the objective is a `ModularObjective`).
    Attested,
    /// Check exhaustively on the ground set; needs `n <= 14`.
    Verify,
}

/// Sample greedy tuned for linear objectives: sampling probability `1/k`.
pub fn sample_greedy_linear<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
    k: usize,
    rng: &mut Rng,
    linearity: Linearity,
    lazy: bool,
) -> Result<SolveResult<T>> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if linearity == Linearity::Verify {
        // A private oracle keeps the check out of the solve's call counts.
        let probe = ValueOracle::new(f.function());
        let ground = GroundSet::new(f.ground_size());
        match check_modular(&probe, &ground) {
            Ok(true) => {}
            Ok(false) => return Err(Error::Domain("objective is not linear".into())),
            Err(e) => return Err(Error::Domain(format!("cannot verify linearity: {e}"))),
        }
    }
    let mut out = sample_greedy(f, ind, candidates, k, rng, Some(1.0 / k as f64), lazy)?;
    out.algorithm = "sample-greedy-linear".into();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::UniformMatroid;
    use crate::objectives::{CutObjective, ModularObjective};

    #[test]
    fn probability_one_is_plain_greedy() {
        let f = CutObjective::new(5, vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 4, 3.0), (0, 4, 1.0)]).unwrap();
        let m = UniformMatroid::new(2);
        let ind = IndependenceOracle::new(&m);
        let all = ElementSet::from([0, 1, 2, 3, 4]);
        let plain = greedy(&ValueOracle::new(&f), &ind, &all, true).unwrap().result;
        for seed in 0..10 {
            let s = sample_greedy(&ValueOracle::new(&f), &ind, &all, 3, &mut Rng::new(seed, 0), Some(1.0), true).unwrap();
            assert_eq!(s.solution, plain.solution);
            assert_eq!(s.seed, Some(seed));
        }
    }

    #[test]
    fn rejects_bad_probability() {
        let f = ModularObjective::new(vec![1.0]).unwrap();
        let m = UniformMatroid::new(1);
        let ind = IndependenceOracle::new(&m);
        let all = ElementSet::from([0]);
        for p in [0.0, -0.5, 1.2] {
            assert!(sample_greedy(&ValueOracle::new(&f), &ind, &all, 1, &mut Rng::new(0, 0), Some(p), true).is_err());
        }
        assert!(sample_greedy(&ValueOracle::new(&f), &ind, &all, 0, &mut Rng::new(0, 0), None, true).is_err());
    }

    #[test]
    fn linear_variant_with_k1_is_exact() {
        let f = ModularObjective::new(vec![1.0, 5.0, 2.0, 4.0]).unwrap();
        let m = UniformMatroid::new(2);
        let ind = IndependenceOracle::new(&m);
        let out = sample_greedy_linear(&ValueOracle::new(&f), &ind, &ElementSet::from([0, 1, 2, 3]), 1, &mut Rng::new(3, 0), Linearity::Verify, true).unwrap();
        assert_eq!(out.value, 9.0);
    }

    #[test]
    fn linear_variant_rejects_nonlinear() {
        let f = CutObjective::new(2, vec![(0, 1, 1.0)]).unwrap();
        let m = UniformMatroid::new(1);
        let err = sample_greedy_linear(&ValueOracle::new(&f), &IndependenceOracle::new(&m), &ElementSet::from([0, 1]), 2, &mut Rng::new(0, 0), Linearity::Verify, true);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn all_zero_weights() {
        let f = ModularObjective::new(vec![0.0; 4]).unwrap();
        let m = UniformMatroid::new(2);
        let out = sample_greedy_linear(&ValueOracle::new(&f), &IndependenceOracle::new(&m), &ElementSet::from([0, 1, 2, 3]), 2, &mut Rng::new(1, 0), Linearity::Attested, true).unwrap();
        assert_eq!(out.value, 0.0);
        assert!(out.solution.is_empty());
    }
}
