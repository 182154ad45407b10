#![allow(dead_code)]

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng as _;
use submax::constraints::{IntersectionSystem, PartitionMatroid};
use submax::objectives::{ModularObjective, SyntheticKind, SyntheticSpec, SyntheticInstance};
use submax::{ElementSet, IndependenceSystem, Result, Rng, SetFunction};

/// Intersection of `k` random partition matroids on `0..n`: blocks of
/// random size, capacities 1 or 2. Such an intersection is k-extendible.
pub fn partition_intersection(n: usize, k: usize, rng: &mut Rng) -> IntersectionSystem {
    let components = (0..k)
        .map(|_| {
            let blocks = rng.gen_range(2..=4);
            let block_of = (0..n).map(|_| Some(rng.gen_range(0..blocks))).collect();
            let capacities = (0..blocks).map(|_| rng.gen_range(1..=2)).collect();
            Box::new(PartitionMatroid::new(block_of, capacities).unwrap()) as Box<dyn IndependenceSystem>
        })
        .collect();
    IntersectionSystem::new(components)
}

pub fn monotone_instance(n: usize, seed: u64) -> SyntheticInstance<f64> {
    SyntheticSpec::new(SyntheticKind::WeightedCoverage, n, seed)
        .density(0.3)
        .items(n)
        .build()
        .unwrap()
        .0
}

/// Alternates cut functions and coverage–dispersion with λ = 1/2 or 1.
pub fn non_monotone_instance(n: usize, seed: u64) -> SyntheticInstance<f64> {
    let spec = match seed % 3 {
        0 => SyntheticSpec::new(SyntheticKind::Cut, n, seed),
        1 => SyntheticSpec::new(SyntheticKind::CoverageDispersion, n, seed).lambda(0.5),
        _ => SyntheticSpec::new(SyntheticKind::CoverageDispersion, n, seed).lambda(1.0),
    };
    spec.build().unwrap().0
}

pub fn modular_instance(n: usize, seed: u64) -> SyntheticInstance<f64> {
    SyntheticSpec::new(SyntheticKind::Modular, n, seed).build().unwrap().0
}

/// `a + b`.
pub struct Plus<A, B>(pub A, pub B);

impl<A: SetFunction<f64>, B: SetFunction<f64>> SetFunction<f64> for Plus<A, B> {
    fn ground_size(&self) -> usize {
        self.0.ground_size().max(self.1.ground_size())
    }

    fn evaluate(&self, set: &ElementSet) -> Result<f64> {
        Ok(self.0.evaluate(set)? + self.1.evaluate(set)?)
    }
}

/// Weight `2^-(5+e)` on element `e`. Synthetic values are multiples of
/// 1/16, so adding this makes every marginal gain of distinct elements
/// distinct while staying exact in `f64` for `n <= 40`.
pub fn tie_breaker(n: usize) -> ModularObjective<f64> {
    assert!(n <= 40);
    ModularObjective::new((0..n).map(|e| (-(5.0 + e as f64)).exp2()).collect()).unwrap()
}

/// Counts every evaluation that reaches the wrapped function.
pub struct Spy<F> {
    pub inner: F,
    pub calls: AtomicU64,
}

impl<F> Spy<F> {
    pub fn new(inner: F) -> Self {
        Self { inner, calls: AtomicU64::new(0) }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }
}

impl<F: SetFunction<f64>> SetFunction<f64> for Spy<F> {
    fn ground_size(&self) -> usize {
        self.inner.ground_size()
    }

    fn evaluate(&self, set: &ElementSet) -> Result<f64> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(set)
    }
}

/// Mean and standard error of the mean.
pub fn mean_sem(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn data_file(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}
