//! Counted value and independence oracles.
//!
//! Algorithms only touch objectives and constraints through these wrappers,
//! so every evaluation and membership query is accounted for. Counters are
//! atomic; the cached marginal base sits behind a mutex. Both are private to
//! one oracle instance, so give each concurrent solve its own wrapper around
//! a shared objective.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sets::{ElementId, ElementSet};

/// A set function `f: 2^N -> T` evaluated as a black box.
pub trait SetFunction<T: Scalar>: Send + Sync {
    /// Size of the universe the function is defined over.
    fn ground_size(&self) -> usize;

    fn evaluate(&self, set: &ElementSet) -> Result<T>;
}

impl<T: Scalar, F: SetFunction<T> + ?Sized> SetFunction<T> for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        (**self).evaluate(set)
    }
}

/// Adapter turning a closure into a [`SetFunction`]. Mostly for tests and fixtures.
pub struct FnObjective<F> {
    n: usize,
    func: F,
}

impl<F> FnObjective<F> {
    pub fn new(n: usize, func: F) -> Self {
        Self { n, func }
    }
}

impl<T, F> SetFunction<T> for FnObjective<F>
where
    T: Scalar,
    F: Fn(&ElementSet) -> T + Send + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        Ok((self.func)(set))
    }
}

/// Outcome of one marginal query `Δf(e|S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marginal<T> {
    /// `f(S + e) - f(S)`.
    pub gain: T,
    /// `f(S + e)`, kept so a caller committing `e` can rebase without re-evaluating.
    pub value_after: T,
}

/// Snapshot of a value oracle's counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValueCounts {
    pub f_evals: u64,
    pub marginal_evals: u64,
}

/// Counted wrapper around a [`SetFunction`] with a one-set marginal cache.
///
/// A marginal query costs one evaluation when `f(S)` is the cached base and
/// two otherwise. Every evaluation is checked for non-negativity.
pub struct ValueOracle<'a, T: Scalar> {
    function: &'a dyn SetFunction<T>,
    eval_count: AtomicU64,
    marginal_count: AtomicU64,
    cached_base: Mutex<Option<(ElementSet, T)>>,
}

impl<'a, T: Scalar> ValueOracle<'a, T> {
    pub fn new(function: &'a dyn SetFunction<T>) -> Self {
        Self {
            function,
            eval_count: AtomicU64::new(0),
            marginal_count: AtomicU64::new(0),
            cached_base: Mutex::new(None),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.function.ground_size()
    }

    pub fn function(&self) -> &'a dyn SetFunction<T> {
        self.function
    }

    /// One raw evaluation of `f(set)`.
    pub fn evaluate(&self, set: &ElementSet) -> Result<T> {
        self.eval_count.fetch_add(1, Ordering::Relaxed);
        let value = self.function.evaluate(set)?;
        if value < T::zero() {
            return Err(Error::NegativeValue {
                set: set.as_slice().to_vec(),
                value: value.to_f64(),
            });
        }
        Ok(value)
    }

    /// Evaluate `f(set)` and make it the cached marginal base.
    pub fn value(&self, set: &ElementSet) -> Result<T> {
        if let Some(v) = self.cached_value(set) {
            return Ok(v);
        }
        let v = self.evaluate(set)?;
        self.rebase(set.clone(), v);
        Ok(v)
    }

    /// `Δf(e | set)` together with `f(set + e)`.
    pub fn marginal(&self, e: ElementId, set: &ElementSet) -> Result<Marginal<T>> {
        if set.contains(e) {
            return Err(Error::Precondition(format!(
                "marginal of {e} requested against a set already containing it"
            )));
        }
        self.marginal_count.fetch_add(1, Ordering::Relaxed);
        let base = self.value(set)?;
        let value_after = self.evaluate(&set.with(e))?;
        Ok(Marginal {
            gain: value_after - base,
            value_after,
        })
    }

    /// `Δf(e | set) = f(set + e) - f(set)`.
    pub fn marginal_gain(&self, e: ElementId, set: &ElementSet) -> Result<T> {
        self.marginal(e, set).map(|m| m.gain)
    }

    /// `f(set - e) - f(set)` for `e ∈ set`; counted as one marginal query.
    pub fn removal_marginal(&self, e: ElementId, set: &ElementSet) -> Result<Marginal<T>> {
        if !set.contains(e) {
            return Err(Error::Precondition(format!(
                "removal marginal of {e} requested against a set not containing it"
            )));
        }
        self.marginal_count.fetch_add(1, Ordering::Relaxed);
        let base = self.value(set)?;
        let value_after = self.evaluate(&set.without(e))?;
        Ok(Marginal {
            gain: value_after - base,
            value_after,
        })
    }

    /// Like [`marginal`](Self::marginal) but with `f(set)` supplied by the
    /// caller, so the query costs exactly one evaluation and leaves the cache alone.
    pub fn marginal_with_base(&self, e: ElementId, set: &ElementSet, base: T) -> Result<Marginal<T>> {
        if set.contains(e) {
            return Err(Error::Precondition(format!(
                "marginal of {e} requested against a set already containing it"
            )));
        }
        self.marginal_count.fetch_add(1, Ordering::Relaxed);
        let value_after = self.evaluate(&set.with(e))?;
        Ok(Marginal {
            gain: value_after - base,
            value_after,
        })
    }

    /// Removal counterpart of [`marginal_with_base`](Self::marginal_with_base).
    pub fn removal_marginal_with_base(&self, e: ElementId, set: &ElementSet, base: T) -> Result<Marginal<T>> {
        if !set.contains(e) {
            return Err(Error::Precondition(format!(
                "removal marginal of {e} requested against a set not containing it"
            )));
        }
        self.marginal_count.fetch_add(1, Ordering::Relaxed);
        let value_after = self.evaluate(&set.without(e))?;
        Ok(Marginal {
            gain: value_after - base,
            value_after,
        })
    }

    /// Commit a known value of `f(set)` as the marginal base without evaluating.
    pub fn rebase(&self, set: ElementSet, value: T) {
        *self.cached_base.lock().expect("oracle cache poisoned") = Some((set, value));
    }

    pub fn clear_cache(&self) {
        *self.cached_base.lock().expect("oracle cache poisoned") = None;
    }

    fn cached_value(&self, set: &ElementSet) -> Option<T> {
        let guard = self.cached_base.lock().expect("oracle cache poisoned");
        match guard.as_ref() {
            Some((base, v)) if base == set => Some(*v),
            _ => None,
        }
    }

    pub fn counts(&self) -> ValueCounts {
        ValueCounts {
            f_evals: self.eval_count.load(Ordering::Relaxed),
            marginal_evals: self.marginal_count.load(Ordering::Relaxed),
        }
    }
}

/// A downward-closed family of independent sets with a declared parameter `k`.
pub trait IndependenceSystem: Send + Sync {
    fn is_independent(&self, set: &ElementSet) -> bool;

    /// Declared k-system / k-extendible parameter.
    fn k(&self) -> usize;
}

impl<S: IndependenceSystem + ?Sized> IndependenceSystem for &S {
    fn is_independent(&self, set: &ElementSet) -> bool {
        (**self).is_independent(set)
    }

    fn k(&self) -> usize {
        (**self).k()
    }
}

impl<S: IndependenceSystem + ?Sized> IndependenceSystem for Box<S> {
    fn is_independent(&self, set: &ElementSet) -> bool {
        (**self).is_independent(set)
    }

    fn k(&self) -> usize {
        (**self).k()
    }
}

/// The trivial system in which every set is independent.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unconstrained;

impl IndependenceSystem for Unconstrained {
    fn is_independent(&self, _set: &ElementSet) -> bool {
        true
    }

    fn k(&self) -> usize {
        1
    }
}

/// Counted membership oracle for an [`IndependenceSystem`].
pub struct IndependenceOracle<'a> {
    system: &'a dyn IndependenceSystem,
    k: usize,
    membership_count: AtomicU64,
}

impl<'a> IndependenceOracle<'a> {
    pub fn new(system: &'a dyn IndependenceSystem) -> Self {
        let k = system.k();
        Self::with_k(system, k)
    }

    /// Wrap `system` but declare a different `k` (e.g. `1 + |G_u|` for genre limits).
    pub fn with_k(system: &'a dyn IndependenceSystem, k: usize) -> Self {
        Self {
            system,
            k: k.max(1),
            membership_count: AtomicU64::new(0),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_independent(&self, set: &ElementSet) -> bool {
        self.membership_count.fetch_add(1, Ordering::Relaxed);
        self.system.is_independent(set)
    }

    /// Membership query that bypasses the counter, for diagnostics.
    pub fn uncounted_is_independent(&self, set: &ElementSet) -> bool {
        self.system.is_independent(set)
    }

    pub fn checks(&self) -> u64 {
        self.membership_count.load(Ordering::Relaxed)
    }
}
