//! Adversarial pair of constraints that no polynomial number of membership
//! queries can tell apart, yet whose largest independent sets differ by a
//! factor close to `k`.
//!
//! The ground set is `h` blocks `H_1..H_h` of `k·m` elements each; element
//! `u_{i,j}` (1-based `i`, `j`) has id `(i−1)·k·m + j − 1`. In mode
//! [`Mode::Extendible`] a set `S` is independent iff
//! `g(|S ∩ H_1|) + |S \ H_1| <= m`, with the gadget
//! `g(x) = min{x, 2km/h} + max{(x − 2km/h)/k, 0}`. In mode [`Mode::Uniform`]
//! it is independent iff `|S| <= m`. All arithmetic on `g` is exact.

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::IndependenceSystem;
use crate::rng::Rng;
use crate::sets::{ElementSet, GroundSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// The k-extendible system with the gadget on `H_1` (`M`).
    Extendible,
    /// Its `m`-uniform twin (`M'`).
    Uniform,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" => Ok(Mode::Extendible),
            "M'" | "M′" => Ok(Mode::Uniform),
            other => Err(Error::Parse(format!("hard-instance mode must be M or M', got `{other}`"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Extendible => "M",
            Mode::Uniform => "M'",
        })
    }
}

/// Gadget parameters: threshold `2km/h` and slope `1/k` beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GadgetParams {
    pub k: i64,
    pub threshold: Rational64,
}

impl GadgetParams {
    pub fn new(k: usize, h: usize, m: usize) -> Self {
        Self {
            k: k as i64,
            threshold: Rational64::new(2 * (k * m) as i64, h as i64),
        }
    }
}

/// `g(x) = min{x, t} + max{(x − t)/k, 0}` with `t = 2km/h`.
pub fn gadget_g(x: usize, params: &GadgetParams) -> Rational64 {
    let x = Rational64::from_integer(x as i64);
    let t = params.threshold;
    let head = if x < t { x } else { t };
    let tail = (x - t) / Rational64::from_integer(params.k);
    head + if tail > Rational64::zero() { tail } else { Rational64::zero() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardInstance {
    pub k: usize,
    pub h: usize,
    pub m: usize,
    pub mode: Mode,
}

impl HardInstance {
    /// Requires positive `k, h, m` with `h` a multiple of `2k`.
    pub fn new(k: usize, h: usize, m: usize, mode: Mode) -> Result<Self> {
        if k == 0 || h == 0 || m == 0 {
            return Err(Error::Domain(format!("k, h, m must be positive (got {k}, {h}, {m})")));
        }
        if !h.is_multiple_of(2 * k) {
            return Err(Error::Domain(format!("h = {h} is not a multiple of 2k = {}", 2 * k)));
        }
        Ok(Self { k, h, m, mode })
    }

    pub fn with_mode(self, mode: Mode) -> Self {
        Self { mode, ..self }
    }

    /// `|H_i| = k·m`.
    pub fn block_size(&self) -> usize {
        self.k * self.m
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::new(self.h * self.block_size())
    }

    pub fn gadget(&self) -> GadgetParams {
        GadgetParams::new(self.k, self.h, self.m)
    }

    /// Dense id of `u_{i,j}` (1-based block and position).
    pub fn element(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.block_size() + j - 1
    }

    pub fn in_first_block(&self, e: usize) -> bool {
        e < self.block_size()
    }

    /// Independence given only `|S ∩ H_1|` and `|S \ H_1|`.
    pub fn is_independent_counts(&self, in_first: usize, outside: usize) -> bool {
        match self.mode {
            Mode::Uniform => in_first + outside <= self.m,
            Mode::Extendible => {
                gadget_g(in_first, &self.gadget()) + Rational64::from_integer(outside as i64)
                    <= Rational64::from_integer(self.m as i64)
            }
        }
    }
}

/// Membership test with a domain error for elements outside the ground set.
pub fn is_independent_hard(inst: &HardInstance, set: &ElementSet) -> Result<bool> {
    inst.ground().check_subset(set)?;
    let in_first = set.iter().filter(|&e| inst.in_first_block(e)).count();
    Ok(inst.is_independent_counts(in_first, set.len() - in_first))
}

impl IndependenceSystem for HardInstance {
    fn is_independent(&self, set: &ElementSet) -> bool {
        is_independent_hard(self, set).unwrap_or(false)
    }

    fn k(&self) -> usize {
        match self.mode {
            Mode::Extendible => self.k,
            Mode::Uniform => 1,
        }
    }
}

/// Size `k(m − 2km/h) + 2km/h` of the large independent set inside `H_1`,
/// rounded down when the threshold is fractional.
pub fn witness_size(inst: &HardInstance) -> usize {
    let t = inst.gadget().threshold;
    let k = Rational64::from_integer(inst.k as i64);
    let m = Rational64::from_integer(inst.m as i64);
    (k * (m - t) + t).floor().to_integer() as usize
}

/// The first `witness_size` elements of `H_1`, independent in mode `M`.
pub fn large_witness(inst: &HardInstance) -> Result<ElementSet> {
    if inst.mode != Mode::Extendible {
        return Err(Error::Precondition("the large witness exists only in mode M".into()));
    }
    let s = witness_size(inst);
    if s > inst.block_size() {
        return Err(Error::Domain(format!("witness size {s} exceeds |H_1| = {}", inst.block_size())));
    }
    let witness: ElementSet = (1..=s).map(|j| inst.element(1, j)).collect();
    if !is_independent_hard(inst, &witness)? {
        return Err(Error::Infeasible(witness.into_vec()));
    }
    Ok(witness)
}

/// `e^{−2km/h²}`, the bound on a random set's labels differing between modes.
pub fn overlap_bound(inst: &HardInstance) -> f64 {
    let (k, h, m) = (inst.k as f64, inst.h as f64, inst.m as f64);
    (-2.0 * k * m / (h * h)).exp()
}

/// Fraction of `trials` uniform random subsets of size `set_size` whose
/// independence differs between modes `M` and `M'`.
///
/// Only sizes in `m < set_size <= km` can ever disagree, so other sizes are
/// refused.
pub fn overlap_probe(inst: &HardInstance, set_size: usize, trials: usize, rng: &mut Rng) -> Result<f64> {
    if set_size <= inst.m || set_size > inst.block_size() {
        return Err(Error::Domain(format!(
            "set size {set_size} outside ({}, {}]; labels always agree there",
            inst.m,
            inst.block_size()
        )));
    }
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let extendible = inst.with_mode(Mode::Extendible);
    let uniform = inst.with_mode(Mode::Uniform);
    let n = inst.ground().len();
    let mut differ = 0usize;
    for _ in 0..trials {
        let in_first = index::sample(rng, n, set_size)
            .iter()
            .filter(|&e| inst.in_first_block(e))
            .count();
        let outside = set_size - in_first;
        if extendible.is_independent_counts(in_first, outside) != uniform.is_independent_counts(in_first, outside) {
            differ += 1;
        }
    }
    Ok(differ as f64 / trials as f64)
}

/// Every valid `(k, h, m)` with the given upper limits.
pub fn valid_triples(max_k: usize, max_h: usize, max_m: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=max_k {
        for h in (2 * k..=max_h).step_by(2 * k) {
            for m in 1..=max_m {
                out.push((k, h, m));
            }
        }
    }
    out
}

/// True iff `1/k <= g(x+1) − g(x) <= 1` for all `x` in `0..=km`.
pub fn gadget_increments_ok(inst: &HardInstance) -> bool {
    let params = inst.gadget();
    let lo = Rational64::new(1, inst.k as i64);
    (0..=inst.block_size()).all(|x| {
        let step = gadget_g(x + 1, &params) - gadget_g(x, &params);
        step >= lo && step <= Rational64::one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{max_feasible_size, verify_downward_closed, verify_k_extendible};
    use crate::oracle::IndependenceOracle;

    fn m248() -> HardInstance {
        HardInstance::new(2, 8, 4, Mode::Extendible).unwrap()
    }

    #[test]
    fn gadget_values() {
        let p = m248().gadget();
        assert_eq!(gadget_g(0, &p), Rational64::zero());
        assert_eq!(gadget_g(2, &p), Rational64::from_integer(2));
        assert_eq!(gadget_g(6, &p), Rational64::from_integer(4));
        assert_eq!(gadget_g(3, &p), Rational64::new(5, 2));
    }

    #[test]
    fn fractional_threshold_is_exact() {
        // 2km/h = 1/2 for (k, h, m) = (2, 8, 1)
        let p = GadgetParams::new(2, 8, 1);
        assert_eq!(p.threshold, Rational64::new(1, 2));
        assert_eq!(gadget_g(1, &p), Rational64::new(3, 4));
        assert_eq!(gadget_g(2, &p), Rational64::new(5, 4));
    }

    #[test]
    fn independence_examples() {
        let inst = m248();
        let six_in_h1: ElementSet = (0..6).collect();
        assert!(is_independent_hard(&inst, &six_in_h1).unwrap());
        let five_outside: ElementSet = (8..13).collect();
        assert!(!is_independent_hard(&inst, &five_outside).unwrap());
        assert!(is_independent_hard(&inst, &ElementSet::new()).unwrap());
        assert!(is_independent_hard(&inst.with_mode(Mode::Uniform), &ElementSet::new()).unwrap());
        assert!(is_independent_hard(&inst, &ElementSet::from([64])).is_err());
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(HardInstance::new(2, 6, 4, Mode::Extendible).is_err());
        assert!(HardInstance::new(0, 4, 4, Mode::Extendible).is_err());
        assert!(HardInstance::new(2, 4, 0, Mode::Uniform).is_err());
    }

    #[test]
    fn witness_examples() {
        let w = large_witness(&m248()).unwrap();
        assert_eq!(w.len(), 6);
        assert!((w.len() as f64 / 4.0) >= 2.0 * (1.0 - 4.0 / 8.0));
        let degenerate = HardInstance::new(1, 2, 5, Mode::Extendible).unwrap();
        assert_eq!(large_witness(&degenerate).unwrap().len(), 5);
        assert!(large_witness(&m248().with_mode(Mode::Uniform)).is_err());
    }

    #[test]
    fn probe_refuses_uninteresting_sizes() {
        let inst = m248();
        let mut rng = Rng::new(0, 0);
        assert!(overlap_probe(&inst, 4, 10, &mut rng).is_err());
        assert!(overlap_probe(&inst, 9, 10, &mut rng).is_err());
        assert!(overlap_probe(&inst, 5, 10, &mut rng).is_ok());
    }

    #[test]
    fn uniform_twin_has_rank_m() {
        let inst = HardInstance::new(2, 4, 2, Mode::Uniform).unwrap();
        let r = max_feasible_size(&IndependenceOracle::new(&inst), &inst.ground());
        assert_eq!(r.size, 2);
    }

    #[test]
    fn prefix_of_m282_is_downward_closed() {
        let inst = HardInstance::new(2, 8, 2, Mode::Extendible).unwrap();
        assert_eq!(inst.ground().len(), 32);
        assert!(verify_downward_closed(&IndependenceOracle::new(&inst), &GroundSet::new(12)).unwrap());
    }

    #[test]
    fn small_instances_are_k_extendible() {
        for (k, h, m) in [(2, 4, 2), (2, 8, 1)] {
            let inst = HardInstance::new(k, h, m, Mode::Extendible).unwrap();
            let ind = IndependenceOracle::new(&inst);
            assert!(verify_k_extendible(&ind, &GroundSet::new(12), k).unwrap(), "({k},{h},{m})");
        }
    }
}
