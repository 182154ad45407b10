//! Concrete non-negative submodular objectives, synthetic instance
//! generators, and exhaustive property checkers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{SetFunction, ValueOracle};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::sets::{ElementId, ElementSet, GroundSet};

/// `f(S) = Σ_{e ∈ S} w(e)` with non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularObjective<T> {
    weights: Vec<T>,
}

impl<T: Scalar> ModularObjective<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if let Some((e, w)) = weights.iter().enumerate().find(|(_, w)| **w < T::zero()) {
            return Err(Error::Domain(format!("weight of element {e} is negative ({w})")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

impl<T: Scalar> SetFunction<T> for ModularObjective<T> {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        set.iter()
            .map(|e| {
                self.weights
                    .get(e)
                    .copied()
                    .ok_or_else(|| Error::Domain(format!("element {e} outside modular objective")))
            })
            .sum()
    }
}

/// Weighted cut: total weight of edges with exactly one endpoint in `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutObjective<T> {
    n: usize,
    edges: Vec<(ElementId, ElementId, T)>,
}

impl<T: Scalar> CutObjective<T> {
    pub fn new(n: usize, edges: Vec<(ElementId, ElementId, T)>) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!("edge ({u},{v}) outside {n} vertices")));
            }
            if w < T::zero() {
                return Err(Error::Domain(format!("edge ({u},{v}) has negative weight {w}")));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn edges(&self) -> &[(ElementId, ElementId, T)] {
        &self.edges
    }
}

impl<T: Scalar> SetFunction<T> for CutObjective<T> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        Ok(self
            .edges
            .iter()
            .filter(|(u, v, _)| set.contains(*u) != set.contains(*v))
            .map(|&(_, _, w)| w)
            .sum())
    }
}

/// Representativeness minus redundancy over a similarity matrix:
///
/// `f(S) = Σ_{i∈S} Σ_{j∈N_u} s_ij − λ Σ_{i∈S} Σ_{j∈S} s_ij`
///
/// The dispersion sum runs over all ordered pairs, diagonal included.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageDispersionObjective<T> {
    n: usize,
    similarity: Vec<T>,
    in_universe: Vec<bool>,
    lambda: T,
    coverage: Vec<T>,
}

impl<T: Scalar> CoverageDispersionObjective<T> {
    /// `similarity` is row-major `n × n`, symmetric and non-negative;
    /// `universe` is `N_u` and `lambda ∈ [0, 1]`.
    pub fn new(n: usize, similarity: Vec<T>, universe: &ElementSet, lambda: T) -> Result<Self> {
        if similarity.len() != n * n {
            return Err(Error::Domain(format!(
                "similarity has {} entries, expected {n}x{n}",
                similarity.len()
            )));
        }
        if lambda < T::zero() || lambda > T::one() {
            return Err(Error::Domain(format!("lambda {lambda} outside [0, 1]")));
        }
        for i in 0..n {
            for j in 0..n {
                let s = similarity[i * n + j];
                if s < T::zero() {
                    return Err(Error::Domain(format!("s[{i}][{j}] = {s} is negative")));
                }
                if s != similarity[j * n + i] {
                    return Err(Error::Domain(format!("similarity not symmetric at ({i},{j})")));
                }
            }
        }
        GroundSet::new(n).check_subset(universe)?;
        let mut in_universe = vec![false; n];
        for e in universe.iter() {
            in_universe[e] = true;
        }
        let coverage = (0..n)
            .map(|i| universe.iter().map(|j| similarity[i * n + j]).sum())
            .collect();
        Ok(Self {
            n,
            similarity,
            in_universe,
            lambda,
            coverage,
        })
    }

    pub fn similarity(&self, i: ElementId, j: ElementId) -> T {
        self.similarity[i * self.n + j]
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn universe(&self) -> ElementSet {
        (0..self.n).filter(|&e| self.in_universe[e]).collect()
    }
}

impl<T: Scalar> SetFunction<T> for CoverageDispersionObjective<T> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        eval_coverage_dispersion(self, set)
    }
}

/// Value of a [`CoverageDispersionObjective`] on `set ⊆ N_u`.
pub fn eval_coverage_dispersion<T: Scalar>(
    obj: &CoverageDispersionObjective<T>,
    set: &ElementSet,
) -> Result<T> {
    if let Some(e) = set.iter().find(|&e| !obj.in_universe.get(e).copied().unwrap_or(false)) {
        return Err(Error::Domain(format!("element {e} is outside N_u")));
    }
    let coverage: T = set.iter().map(|i| obj.coverage[i]).sum();
    let dispersion: T = set
        .iter()
        .map(|i| set.iter().map(|j| obj.similarity(i, j)).sum::<T>())
        .sum();
    let value = coverage - obj.lambda * dispersion;
    if value < T::zero() {
        return Err(Error::NegativeValue {
            set: set.as_slice().to_vec(),
            value: value.to_f64(),
        });
    }
    Ok(value)
}

/// `f(S) = Σ` weights of items covered by at least one member of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCoverageObjective<T> {
    covers: Vec<Vec<usize>>,
    item_weights: Vec<T>,
}

impl<T: Scalar> WeightedCoverageObjective<T> {
    pub fn new(covers: Vec<Vec<usize>>, item_weights: Vec<T>) -> Result<Self> {
        if let Some(item) = covers.iter().flatten().find(|&&i| i >= item_weights.len()) {
            return Err(Error::Domain(format!("item {item} has no weight")));
        }
        if item_weights.iter().any(|w| *w < T::zero()) {
            return Err(Error::Domain("item weights must be non-negative".into()));
        }
        Ok(Self {
            covers,
            item_weights,
        })
    }
}

impl<T: Scalar> SetFunction<T> for WeightedCoverageObjective<T> {
    fn ground_size(&self) -> usize {
        self.covers.len()
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        let mut covered = vec![false; self.item_weights.len()];
        let mut total = T::zero();
        for e in set.iter() {
            let items = self
                .covers
                .get(e)
                .ok_or_else(|| Error::Domain(format!("element {e} outside coverage objective")))?;
            for &item in items {
                if !covered[item] {
                    covered[item] = true;
                    total = total + self.item_weights[item];
                }
            }
        }
        Ok(total)
    }
}

/// A set function given by an explicit value table. Unlisted subsets are a
/// domain error at evaluation time.
#[derive(Debug, Clone, PartialEq)]
pub struct TableObjective<T> {
    n: usize,
    values: std::collections::HashMap<ElementSet, T>,
}

impl<T: Scalar> TableObjective<T> {
    pub fn new(n: usize, rows: impl IntoIterator<Item = (ElementSet, T)>) -> Result<Self> {
        let ground = GroundSet::new(n);
        let mut values = std::collections::HashMap::new();
        for (set, v) in rows {
            ground.check_subset(&set)?;
            values.insert(set, v);
        }
        Ok(Self { n, values })
    }
}

impl<T: Scalar> SetFunction<T> for TableObjective<T> {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        self.values
            .get(set)
            .copied()
            .ok_or_else(|| Error::Domain(format!("no table entry for {set}")))
    }
}

pub const CHECK_LIMIT: usize = 14;
pub const LATTICE_CHECK_LIMIT: usize = 12;

fn value_table<T: Scalar>(f: &ValueOracle<'_, T>, ground: &GroundSet, what: &'static str, limit: usize) -> Result<Vec<T>> {
    let n = ground.len();
    if n > limit {
        return Err(Error::Capacity { what, limit, n });
    }
    (0..1u64 << n)
        .map(|mask| f.evaluate(&ground.subset_from_mask(mask)))
        .collect()
}

/// Diminishing returns, exhaustively: `Δf(e|A) >= Δf(e|B)` for all `A ⊆ B`, `e ∉ B`.
pub fn check_submodular<T: Scalar>(f: &ValueOracle<'_, T>, ground: &GroundSet) -> Result<bool> {
    let n = ground.len();
    let table = value_table(f, ground, "check_submodular", CHECK_LIMIT)?;
    let full = (1usize << n) - 1;
    for b in 0..=full {
        for e in (0..n).filter(|&e| b >> e & 1 == 0) {
            let bit = 1 << e;
            let outer = table[b | bit] - table[b];
            let mut a = b;
            loop {
                if table[a | bit] - table[a] < outer {
                    return Ok(false);
                }
                if a == 0 {
                    break;
                }
                a = (a - 1) & b;
            }
        }
    }
    Ok(true)
}

/// The lattice form: `f(X) + f(Y) >= f(X ∩ Y) + f(X ∪ Y)` for all pairs.
pub fn check_submodular_lattice<T: Scalar>(f: &ValueOracle<'_, T>, ground: &GroundSet) -> Result<bool> {
    let table = value_table(f, ground, "check_submodular_lattice", LATTICE_CHECK_LIMIT)?;
    let size = table.len();
    for x in 0..size {
        for y in x + 1..size {
            if table[x] + table[y] < table[x & y] + table[x | y] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Δf(e|S) >= 0` for every `S` and `e ∉ S`.
pub fn check_monotone<T: Scalar>(f: &ValueOracle<'_, T>, ground: &GroundSet) -> Result<bool> {
    let n = ground.len();
    let table = value_table(f, ground, "check_monotone", CHECK_LIMIT)?;
    Ok((0..table.len()).all(|s| {
        (0..n)
            .filter(|&e| s >> e & 1 == 0)
            .all(|e| table[s | 1 << e] >= table[s])
    }))
}

/// `f(S) = Σ_{e∈S} f({e})` with `f(∅) = 0`.
pub fn check_modular<T: Scalar>(f: &ValueOracle<'_, T>, ground: &GroundSet) -> Result<bool> {
    let n = ground.len();
    let table = value_table(f, ground, "check_modular", CHECK_LIMIT)?;
    if table[0] != T::zero() {
        return Ok(false);
    }
    Ok((0..table.len()).all(|s| {
        let sum: T = (0..n).filter(|&e| s >> e & 1 == 1).map(|e| table[1 << e]).sum();
        sum == table[s]
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SyntheticKind {
    Modular,
    CoverageDispersion,
    Cut,
    WeightedCoverage,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modular" => Ok(Self::Modular),
            "coverage_dispersion" | "coverage-dispersion" => Ok(Self::CoverageDispersion),
            "cut" => Ok(Self::Cut),
            "weighted_coverage" | "weighted-coverage" => Ok(Self::WeightedCoverage),
            other => Err(Error::Parse(format!("unknown synthetic kind `{other}`"))),
        }
    }
}

/// Recipe for a seeded synthetic instance.
///
/// Every weight and similarity is `numerator / 2^denominator_bits` with an
/// integer numerator in `1..=max_numerator` (`0..=` for modular weights), so
/// all sums are exact in `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub n: usize,
    /// Edge / nonzero-similarity / cover probability.
    pub density: f64,
    pub max_numerator: u32,
    pub denominator_bits: u32,
    /// Dispersion weight for coverage–dispersion instances.
    pub lambda: f64,
    /// Item count for weighted coverage.
    pub items: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            density: 0.5,
            max_numerator: 16,
            denominator_bits: 4,
            lambda: 0.5,
            items: 2 * n,
            seed,
        }
    }

    pub fn density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn max_numerator(mut self, max_numerator: u32) -> Self {
        self.max_numerator = max_numerator;
        self
    }

    pub fn items(mut self, items: usize) -> Self {
        self.items = items;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::Domain(format!("density {} outside [0, 1]", self.density)));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::Domain(format!("lambda {} outside [0, 1]", self.lambda)));
        }
        if self.max_numerator == 0 {
            return Err(Error::Domain("max_numerator must be positive".into()));
        }
        if self.denominator_bits > 20 {
            return Err(Error::Domain("denominator_bits must be at most 20".into()));
        }
        Ok(())
    }

    /// Generate with the stream `(seed, 0)`.
    pub fn build<T: Scalar>(&self) -> Result<(SyntheticInstance<T>, GroundSet)> {
        generate(self, &mut Rng::new(self.seed, 0))
    }
}

/// A generated objective of any [`SyntheticKind`].
#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticInstance<T> {
    Modular(ModularObjective<T>),
    CoverageDispersion(CoverageDispersionObjective<T>),
    Cut(CutObjective<T>),
    WeightedCoverage(WeightedCoverageObjective<T>),
}

impl<T: Scalar> SetFunction<T> for SyntheticInstance<T> {
    fn ground_size(&self) -> usize {
        match self {
            Self::Modular(f) => f.ground_size(),
            Self::CoverageDispersion(f) => f.ground_size(),
            Self::Cut(f) => f.ground_size(),
            Self::WeightedCoverage(f) => f.ground_size(),
        }
    }

    fn evaluate(&self, set: &ElementSet) -> Result<T> {
        match self {
            Self::Modular(f) => f.evaluate(set),
            Self::CoverageDispersion(f) => f.evaluate(set),
            Self::Cut(f) => f.evaluate(set),
            Self::WeightedCoverage(f) => f.evaluate(set),
        }
    }
}

fn dyadic<T: Scalar>(numerator: u32, bits: u32) -> T {
    T::from_f64(numerator as f64 / (1u64 << bits) as f64).expect("dyadic values are finite")
}

fn draw_numerator(rng: &mut Rng, lo: u32, hi: u32) -> u32 {
    use rand::Rng as _;
    rng.gen_range(lo..=hi)
}

/// Draw a deterministic instance from `spec` using `rng`.
pub fn generate<T: Scalar>(spec: &SyntheticSpec, rng: &mut Rng) -> Result<(SyntheticInstance<T>, GroundSet)> {
    spec.validate()?;
    let n = spec.n;
    let bits = spec.denominator_bits;
    let instance = match spec.kind {
        SyntheticKind::Modular => {
            let weights = (0..n)
                .map(|_| dyadic(draw_numerator(rng, 0, spec.max_numerator), bits))
                .collect();
            SyntheticInstance::Modular(ModularObjective::new(weights)?)
        }
        SyntheticKind::Cut => {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.bernoulli(spec.density)? {
                        edges.push((u, v, dyadic(draw_numerator(rng, 1, spec.max_numerator), bits)));
                    }
                }
            }
            SyntheticInstance::Cut(CutObjective::new(n, edges)?)
        }
        SyntheticKind::CoverageDispersion => {
            let mut s = vec![T::zero(); n * n];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.bernoulli(spec.density)? {
                        let v: T = dyadic(draw_numerator(rng, 1, spec.max_numerator), bits);
                        s[i * n + j] = v;
                        s[j * n + i] = v;
                    }
                }
            }
            let lambda = T::from_f64(spec.lambda)
                .ok_or_else(|| Error::Domain(format!("lambda {} not representable", spec.lambda)))?;
            let universe = GroundSet::new(n).full();
            SyntheticInstance::CoverageDispersion(CoverageDispersionObjective::new(n, s, &universe, lambda)?)
        }
        SyntheticKind::WeightedCoverage => {
            let item_weights = (0..spec.items)
                .map(|_| dyadic(draw_numerator(rng, 1, spec.max_numerator), bits))
                .collect();
            let mut covers = Vec::with_capacity(n);
            for _ in 0..n {
                let mut items = Vec::new();
                for item in 0..spec.items {
                    if rng.bernoulli(spec.density)? {
                        items.push(item);
                    }
                }
                covers.push(items);
            }
            SyntheticInstance::WeightedCoverage(WeightedCoverageObjective::new(covers, item_weights)?)
        }
    };
    Ok((instance, GroundSet::new(n)))
}
