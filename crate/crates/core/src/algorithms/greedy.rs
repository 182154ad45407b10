use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::Result;
use crate::oracle::{IndependenceOracle, Marginal, ValueOracle};
use crate::result::{Meter, SolveResult};
use crate::scalar::Scalar;
use crate::sets::{ElementId, ElementSet};

/// One selection made by the greedy algorithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GreedyStep<T> {
    pub element: ElementId,
    pub gain: T,
    pub value_after: T,
}

/// Selections in order. Gains are strictly positive and values increase.
pub type GreedyTrace<T> = Vec<GreedyStep<T>>;

#[derive(Debug, Clone)]
pub struct GreedyOutcome<T> {
    pub result: SolveResult<T>,
    pub trace: GreedyTrace<T>,
}

/// Greedy maximization restricted to `candidates`.
///
/// Repeatedly adds the feasible candidate with the largest marginal gain
/// (smallest id on ties) while that gain is strictly positive. With `lazy`,
/// stale gains are kept in a max-heap and only the head is refreshed; under
/// submodularity both variants select the same elements in the same order.
pub fn greedy<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
    lazy: bool,
) -> Result<GreedyOutcome<T>> {
    let meter = Meter::start(f, Some(ind));
    let (solution, value, trace) = if lazy {
        lazy_greedy(f, ind, candidates)?
    } else {
        naive_greedy(f, ind, candidates)?
    };
    let name = if lazy { "lazy-greedy" } else { "greedy" };
    Ok(GreedyOutcome {
        result: meter.finish(name, f, Some(ind), solution, value, None),
        trace,
    })
}

type Selection<T> = (ElementSet, T, GreedyTrace<T>);

fn naive_greedy<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
) -> Result<Selection<T>> {
    let mut solution = ElementSet::new();
    let mut value = f.value(&solution)?;
    let mut trace = Vec::new();
    let mut alive: Vec<ElementId> = candidates.iter().collect();
    loop {
        // A candidate that is infeasible now stays infeasible.
        alive.retain(|&e| ind.is_independent(&solution.with(e)));
        let mut best: Option<(ElementId, Marginal<T>)> = None;
        for &e in &alive {
            let m = f.marginal(e, &solution)?;
            match best {
                Some((_, ref b)) if m.gain <= b.gain => {}
                _ => best = Some((e, m)),
            }
        }
        match best {
            Some((e, m)) if m.gain > T::zero() => {
                solution.insert(e);
                f.rebase(solution.clone(), m.value_after);
                value = m.value_after;
                trace.push(GreedyStep {
                    element: e,
                    gain: m.gain,
                    value_after: m.value_after,
                });
                alive.retain(|&x| x != e);
            }
            _ => break,
        }
    }
    Ok((solution, value, trace))
}

struct HeapEntry<T> {
    gain: T,
    value_after: T,
    element: ElementId,
    /// Solution size at which `gain` was computed.
    stamp: usize,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    // Larger gain first, then smaller id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .partial_cmp(&other.gain)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.element.cmp(&self.element))
    }
}

fn lazy_greedy<T: Scalar>(
    f: &ValueOracle<'_, T>,
    ind: &IndependenceOracle<'_>,
    candidates: &ElementSet,
) -> Result<Selection<T>> {
    let mut solution = ElementSet::new();
    let mut value = f.value(&solution)?;
    let mut trace = Vec::new();
    let mut heap = BinaryHeap::with_capacity(candidates.len());
    for e in candidates.iter() {
        let m = f.marginal(e, &solution)?;
        heap.push(HeapEntry {
            gain: m.gain,
            value_after: m.value_after,
            element: e,
            stamp: 0,
        });
    }
    while let Some(top) = heap.pop() {
        if !ind.is_independent(&solution.with(top.element)) {
            continue;
        }
        if top.stamp == solution.len() {
            if top.gain <= T::zero() {
                break;
            }
            solution.insert(top.element);
            f.rebase(solution.clone(), top.value_after);
            value = top.value_after;
            trace.push(GreedyStep {
                element: top.element,
                gain: top.gain,
                value_after: top.value_after,
            });
        } else {
            let m = f.marginal(top.element, &solution)?;
            heap.push(HeapEntry {
                gain: m.gain,
                value_after: m.value_after,
                element: top.element,
                stamp: solution.len(),
            });
        }
    }
    Ok((solution, value, trace))
}
