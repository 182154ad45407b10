//! Sample greedy in its analysis form, with the bookkeeping sets made
//! explicit and audited at every step.
//!
//! Instead of sampling upfront, a coin is flipped when an element is
//! considered (chosen as the best feasible positive-gain candidate). Alongside
//! the solution `S` the run maintains `O`, which starts as a given optimum and
//! is repaired after every consideration so that:
//!
//! * P1: `O` is independent;
//! * P2: `S ⊆ O`;
//! * P3: every element of `O \ S` has not been considered yet.
//!
//! The removed set `O_u` never exceeds `k` elements on a k-extendible system.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{IndependenceOracle, ValueOracle};
use crate::result::{Meter, SolveResult};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::sets::{ElementId, ElementSet};

/// Source of the per-consideration coins.
pub enum CoinPolicy<'r> {
    /// A fresh draw each time an element is considered.
    PerConsideration(&'r mut Rng),
    /// One draw per candidate in ascending id order, made before the run;
    /// the considered element reads its own coin. This is the same draw
    /// sequence [`sample_greedy`](super::sample_greedy) consumes, so paired
    /// seeds give identical solutions.
    PerElement(&'r mut Rng),
    /// Every coin lands heads (test hook).
    ForcedHeads,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstrumentedStep {
    /// The considered element `u`.
    pub element: ElementId,
    /// `S_u`, the solution when `u` was considered.
    pub solution_before: ElementSet,
    pub heads: bool,
    /// `O` at the start of the iteration.
    pub o_before: ElementSet,
    /// `O_u`, the elements removed from `O` in this iteration.
    pub removed: ElementSet,
    /// `X_u`: `u` was considered. Always true for a recorded step.
    pub considered: bool,
    /// `Y_u`: `u` joined `S` while not in `O` at the start of the iteration.
    pub added_outside_o: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstrumentedTrace {
    pub probability: f64,
    pub steps: Vec<InstrumentedStep>,
    pub final_o: ElementSet,
}

#[derive(Debug, Clone)]
pub struct InstrumentedOutcome<T> {
    pub result: SolveResult<T>,
    pub trace: InstrumentedTrace,
}

/// Run the analysis form of sample greedy from the independent set `opt`,
/// failing with [`Error::Invariant`] on the first violated property.
pub fn instrumented_sample_greedy<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
    k: usize,
    coins: CoinPolicy<'_>,
    opt: &ElementSet,
) -> Result<InstrumentedOutcome<T>> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let p = 1.0 / (k as f64 + 1.0);
    // Bookkeeping for O does not influence S; keep it off the solve's counters.
    let audit_system = AuditSystem(ind);
    let audit = IndependenceOracle::with_k(&audit_system, k);
    if !audit.is_independent(opt) {
        return Err(Error::Domain(format!("reference set {opt} is not independent")));
    }
    let meter = Meter::start(f, Some(ind));

    let mut seed = None;
    let mut coin: Box<dyn FnMut(ElementId) -> Result<bool> + '_> = match coins {
        CoinPolicy::PerConsideration(rng) => {
            seed = Some(rng.master_seed());
            Box::new(move |_| rng.bernoulli(p))
        }
        CoinPolicy::PerElement(rng) => {
            seed = Some(rng.master_seed());
            let mut drawn = std::collections::HashMap::new();
            for u in candidates.iter() {
                drawn.insert(u, rng.bernoulli(p)?);
            }
            Box::new(move |u| Ok(drawn[&u]))
        }
        CoinPolicy::ForcedHeads => Box::new(|_| Ok(true)),
    };

    let mut solution = ElementSet::new();
    let mut value = f.value(&solution)?;
    let mut o = opt.clone();
    let mut remaining: Vec<ElementId> = candidates.iter().collect();
    let mut considered = ElementSet::new();
    let mut steps = Vec::new();

    loop {
        let mut best: Option<(ElementId, crate::oracle::Marginal<T>)> = None;
        for &u in &remaining {
            if !ind.is_independent(&solution.with(u)) {
                continue;
            }
            let m = f.marginal(u, &solution)?;
            if m.gain > T::zero() && best.as_ref().is_none_or(|(_, b)| m.gain > b.gain) {
                best = Some((u, m));
            }
        }
        let Some((u, m)) = best else { break };
        let iteration = steps.len();
        let solution_before = solution.clone();
        let o_before = o.clone();
        let u_in_o = o.contains(u);
        let heads = coin(u)?;
        let removed = if heads {
            solution.insert(u);
            f.rebase(solution.clone(), m.value_after);
            value = m.value_after;
            o.insert(u);
            smallest_repair(&audit, &o, &solution, iteration)?
        } else if u_in_o {
            ElementSet::from([u])
        } else {
            ElementSet::new()
        };
        if !removed.is_subset(&o.difference(&solution)) {
            return Err(invariant("O_u ⊆ O \\ S", iteration, format!("O_u = {removed}")));
        }
        if removed.len() > k {
            return Err(invariant("|O_u| <= k", iteration, format!("|O_u| = {}", removed.len())));
        }
        o = o.difference(&removed);
        remaining.retain(|&x| x != u);
        considered.insert(u);

        if !audit.is_independent(&o) {
            return Err(invariant("P1", iteration, format!("O = {o} is dependent")));
        }
        if !solution.is_subset(&o) {
            return Err(invariant("P2", iteration, format!("S = {solution} not inside O = {o}")));
        }
        if let Some(x) = o.difference(&solution).iter().find(|&x| considered.contains(x)) {
            return Err(invariant("P3", iteration, format!("{x} ∈ O \\ S was already considered")));
        }

        steps.push(InstrumentedStep {
            element: u,
            solution_before,
            heads,
            o_before,
            removed,
            considered: true,
            added_outside_o: heads && !u_in_o,
        });
    }

    Ok(InstrumentedOutcome {
        result: meter.finish("instrumented-sample-greedy", f, Some(ind), solution, value, seed),
        trace: InstrumentedTrace {
            probability: p,
            steps,
            final_o: o,
        },
    })
}

fn invariant(property: &'static str, iteration: usize, detail: String) -> Error {
    Error::Invariant {
        property,
        iteration,
        detail,
    }
}

/// Smallest `R ⊆ O \ S` (fewest elements, then lexicographically first)
/// with `O \ R` independent.
fn smallest_repair(
    ind: &IndependenceOracle<'_>,
    o: &ElementSet,
    solution: &ElementSet,
    iteration: usize,
) -> Result<ElementSet> {
    let pool: Vec<ElementId> = o.difference(solution).into_vec();
    for size in 0..=pool.len() {
        let mut found = None;
        for_each_combination(pool.len(), size, |idx| {
            let r: ElementSet = idx.iter().map(|&i| pool[i]).collect();
            if ind.is_independent(&o.difference(&r)) {
                found = Some(r);
                true
            } else {
                false
            }
        });
        if let Some(r) = found {
            return Ok(r);
        }
    }
    Err(invariant("P1", iteration, format!("no subset of O \\ S restores independence of {o}")))
}

/// Calls `visit` on each `size`-subset of `0..n` in lexicographic order
/// until it returns true.
fn for_each_combination<F: FnMut(&[usize]) -> bool>(n: usize, size: usize, mut visit: F) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let Some(i) = (0..size).rev().find(|&i| idx[i] != i + n - size) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

struct AuditSystem<'a, 'b>(&'a IndependenceOracle<'b>);

impl crate::oracle::IndependenceSystem for AuditSystem<'_, '_> {
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.0.uncounted_is_independent(set)
    }

    fn k(&self) -> usize {
        self.0.k()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{brute_force_opt, greedy};
    use crate::constraints::{PartitionMatroid, UniformMatroid};
    use crate::objectives::ModularObjective;

    #[test]
    fn combinations_in_lex_order() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        for_each_combination(3, 0, |_| {
            empty += 1;
            false
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn forced_heads_reproduces_greedy() {
        let f = ModularObjective::new(vec![2.0, 7.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
        let sys = PartitionMatroid::round_robin(6, 2, 2);
        let ind = IndependenceOracle::new(&sys);
        let all: ElementSet = (0..6).collect();
        let opt = brute_force_opt(&ValueOracle::new(&f), &ind, &all).unwrap().solution;
        let out = instrumented_sample_greedy(&ValueOracle::new(&f), &ind, &all, 1, CoinPolicy::ForcedHeads, &opt).unwrap();
        let plain = greedy(&ValueOracle::new(&f), &ind, &all, false).unwrap().result;
        assert_eq!(out.result.solution, plain.solution);
        assert!(out.trace.steps.iter().all(|s| s.heads && s.considered));
    }

    #[test]
    fn dependent_reference_is_rejected() {
        let f = ModularObjective::new(vec![1.0; 3]).unwrap();
        let m = UniformMatroid::new(1);
        let err = instrumented_sample_greedy(
            &ValueOracle::new(&f),
            &IndependenceOracle::new(&m),
            &ElementSet::from([0, 1, 2]),
            1,
            CoinPolicy::ForcedHeads,
            &ElementSet::from([0, 1]),
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn tails_drop_members_of_o() {
        let f = ModularObjective::new(vec![3.0, 2.0, 1.0]).unwrap();
        let m = UniformMatroid::new(2);
        let ind = IndependenceOracle::new(&m);
        let all = ElementSet::from([0, 1, 2]);
        let opt = ElementSet::from([0, 1]);
        for seed in 0..50 {
            let out = instrumented_sample_greedy(&ValueOracle::new(&f), &ind, &all, 1, CoinPolicy::PerConsideration(&mut Rng::new(seed, 0)), &opt).unwrap();
            for step in &out.trace.steps {
                if !step.heads {
                    assert_eq!(step.removed.len(), usize::from(step.o_before.contains(step.element)));
                }
            }
        }
    }
}
