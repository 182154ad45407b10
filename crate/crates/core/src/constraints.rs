//! Independence systems and exhaustive verifiers for their defining properties.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::oracle::{IndependenceOracle, IndependenceSystem};
use crate::sets::{ElementId, ElementSet, GroundSet};

/// `S` is independent iff `|S| <= rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformMatroid {
    pub rank: usize,
}

impl UniformMatroid {
    pub fn new(rank: usize) -> Self {
        Self { rank }
    }
}

impl IndependenceSystem for UniformMatroid {
    fn is_independent(&self, set: &ElementSet) -> bool {
        set.len() <= self.rank
    }

    fn k(&self) -> usize {
        1
    }
}

/// Each block may contribute at most its capacity. Elements outside every
/// block are unconstrained; a block with capacity 0 makes its members loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionMatroid {
    block_of: Vec<Option<usize>>,
    capacities: Vec<usize>,
}

impl PartitionMatroid {
    /// `block_of[e]` names the block of element `e`; `capacities[b]` bounds block `b`.
    pub fn new(block_of: Vec<Option<usize>>, capacities: Vec<usize>) -> Result<Self> {
        if let Some(b) = block_of.iter().flatten().find(|&&b| b >= capacities.len()) {
            return Err(Error::Domain(format!(
                "block {b} has no capacity ({} capacities given)",
                capacities.len()
            )));
        }
        Ok(Self {
            block_of,
            capacities,
        })
    }

    /// Every element in its own block `e % blocks`, each with the same capacity.
    pub fn round_robin(n: usize, blocks: usize, capacity: usize) -> Self {
        Self {
            block_of: (0..n).map(|e| Some(e % blocks.max(1))).collect(),
            capacities: vec![capacity; blocks.max(1)],
        }
    }
}

impl IndependenceSystem for PartitionMatroid {
    fn is_independent(&self, set: &ElementSet) -> bool {
        let mut used = vec![0usize; self.capacities.len()];
        for e in set.iter() {
            if let Some(Some(b)) = self.block_of.get(e) {
                used[*b] += 1;
                if used[*b] > self.capacities[*b] {
                    return false;
                }
            }
        }
        true
    }

    fn k(&self) -> usize {
        1
    }
}

/// Sets independent in every component.
pub struct IntersectionSystem {
    components: Vec<Box<dyn IndependenceSystem>>,
    k: usize,
}

impl IntersectionSystem {
    /// Declared `k` is the sum of the components' `k` (the number of matroids
    /// when every component is a matroid).
    pub fn new(components: Vec<Box<dyn IndependenceSystem>>) -> Self {
        let k = components.iter().map(|c| c.k()).sum::<usize>().max(1);
        Self { components, k }
    }

    pub fn with_declared_k(mut self, k: usize) -> Self {
        self.k = k.max(1);
        self
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

impl IndependenceSystem for IntersectionSystem {
    fn is_independent(&self, set: &ElementSet) -> bool {
        self.components.iter().all(|c| c.is_independent(set))
    }

    fn k(&self) -> usize {
        self.k
    }
}

/// Total and per-genre limits over the movies of a user's favorite genres.
///
/// `S` is independent iff `S ⊆ N_u`, `|S| <= m`, and `|S ∩ N(g)| <= m_g` for
/// every favorite genre `g`. A multi-genre element counts against each
/// favorite genre it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenreConstraint {
    /// Favorite-genre indices per element (positions into `favorites`).
    favorite_genres_of: Vec<Vec<usize>>,
    favorites: Vec<String>,
    total_limit: usize,
    genre_limits: Vec<usize>,
    k: usize,
}

impl GenreConstraint {
    /// `genres_of[e]` lists the genre labels of element `e`.
    pub fn new(
        genres_of: &[Vec<String>],
        favorites: &[String],
        total_limit: usize,
        genre_limits: &[usize],
    ) -> Result<Self> {
        if favorites.is_empty() {
            return Err(Error::Domain("at least one favorite genre is required".into()));
        }
        if genre_limits.len() != favorites.len() && genre_limits.len() != 1 {
            return Err(Error::Domain(format!(
                "{} genre limits for {} favorite genres",
                genre_limits.len(),
                favorites.len()
            )));
        }
        let genre_limits = if genre_limits.len() == 1 {
            vec![genre_limits[0]; favorites.len()]
        } else {
            genre_limits.to_vec()
        };
        let favorite_genres_of = genres_of
            .iter()
            .map(|labels| {
                favorites
                    .iter()
                    .enumerate()
                    .filter(|(_, fav)| labels.contains(fav))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Ok(Self {
            favorite_genres_of,
            favorites: favorites.to_vec(),
            total_limit,
            genre_limits,
            k: favorites.len(),
        })
    }

    /// Override the declared `k` (default `|G_u|`).
    pub fn with_declared_k(mut self, k: usize) -> Self {
        self.k = k.max(1);
        self
    }

    pub fn favorites(&self) -> &[String] {
        &self.favorites
    }

    pub fn total_limit(&self) -> usize {
        self.total_limit
    }

    pub fn ground_size(&self) -> usize {
        self.favorite_genres_of.len()
    }

    pub fn in_universe(&self, e: ElementId) -> bool {
        self.favorite_genres_of.get(e).is_some_and(|g| !g.is_empty())
    }

    /// `N_u`, the union of the favorite genres.
    pub fn universe(&self) -> ElementSet {
        (0..self.ground_size()).filter(|&e| self.in_universe(e)).collect()
    }

    /// The same constraint as an intersection of `1 + |G_u|` matroids: an
    /// `m`-uniform matroid and one partition matroid per favorite genre.
    /// Elements outside `N_u` are loops of the first genre matroid.
    pub fn as_intersection(&self) -> IntersectionSystem {
        let n = self.ground_size();
        let mut components: Vec<Box<dyn IndependenceSystem>> =
            vec![Box::new(UniformMatroid::new(self.total_limit))];
        for (gi, &limit) in self.genre_limits.iter().enumerate() {
            let mut capacities = vec![limit];
            let mut block_of = vec![None; n];
            if gi == 0 {
                capacities.push(0);
            }
            for (e, genres) in self.favorite_genres_of.iter().enumerate() {
                if genres.contains(&gi) {
                    block_of[e] = Some(0);
                } else if gi == 0 && genres.is_empty() {
                    block_of[e] = Some(1);
                }
            }
            components.push(Box::new(
                PartitionMatroid::new(block_of, capacities).expect("blocks are in range"),
            ));
        }
        IntersectionSystem::new(components).with_declared_k(self.k)
    }
}

impl IndependenceSystem for GenreConstraint {
    fn is_independent(&self, set: &ElementSet) -> bool {
        if set.len() > self.total_limit {
            return false;
        }
        let mut used = vec![0usize; self.favorites.len()];
        for e in set.iter() {
            let Some(genres) = self.favorite_genres_of.get(e) else {
                return false;
            };
            if genres.is_empty() {
                return false;
            }
            for &g in genres {
                used[g] += 1;
                if used[g] > self.genre_limits[g] {
                    return false;
                }
            }
        }
        true
    }

    fn k(&self) -> usize {
        self.k
    }
}

pub const DOWNWARD_CLOSED_LIMIT: usize = 20;
pub const K_SYSTEM_LIMIT: usize = 16;
pub const K_EXTENDIBLE_LIMIT: usize = 16;
pub const EXACT_RANK_LIMIT: usize = 16;
pub const EXCHANGE_LIMIT: usize = 12;

fn require(what: &'static str, limit: usize, n: usize) -> Result<()> {
    if n > limit {
        Err(Error::Capacity { what, limit, n })
    } else {
        Ok(())
    }
}

/// Independence of every subset of `0..n`, indexed by bitmask.
pub(crate) fn independence_table(ind: &IndependenceOracle<'_>, n: usize) -> Vec<bool> {
    let ground = GroundSet::new(n);
    (0..1u64 << n)
        .map(|mask| ind.is_independent(&ground.subset_from_mask(mask)))
        .collect()
}

/// Visit every independent subset of `candidates` by depth-first extension in
/// ascending id order. Each set is visited once; branches stop at the first
/// dependent set, which is exhaustive for downward-closed families.
pub(crate) fn for_each_independent<F>(
    ind: &IndependenceOracle<'_>,
    candidates: &[ElementId],
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&ElementSet) -> Result<()>,
{
    fn go<F>(
        ind: &IndependenceOracle<'_>,
        candidates: &[ElementId],
        from: usize,
        current: &mut ElementSet,
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&ElementSet) -> Result<()>,
    {
        visit(current)?;
        for i in from..candidates.len() {
            let e = candidates[i];
            current.insert(e);
            if ind.is_independent(current) {
                go(ind, candidates, i + 1, current, visit)?;
            }
            current.remove(e);
        }
        Ok(())
    }
    let mut current = ElementSet::new();
    if !ind.is_independent(&current) {
        return Err(Error::Domain("the empty set must be independent".into()));
    }
    go(ind, candidates, 0, &mut current, &mut visit)
}

/// True iff removing any one element from any independent subset of the
/// ground set leaves it independent (and the empty set is independent).
pub fn verify_downward_closed(ind: &IndependenceOracle<'_>, ground: &GroundSet) -> Result<bool> {
    let n = ground.len();
    require("verify_downward_closed", DOWNWARD_CLOSED_LIMIT, n)?;
    let table = independence_table(ind, n);
    if !table[0] {
        return Ok(false);
    }
    Ok((0..table.len()).filter(|&b| table[b]).all(|b| {
        (0..n)
            .filter(|e| b >> e & 1 == 1)
            .all(|e| table[b & !(1 << e)])
    }))
}

/// The smallest `k` for which the system is a k-system on `ground`: the
/// largest ratio between the biggest and smallest base of any subset `X`.
pub fn verify_k_system(ind: &IndependenceOracle<'_>, ground: &GroundSet) -> Result<f64> {
    let n = ground.len();
    require("verify_k_system", K_SYSTEM_LIMIT, n)?;
    let table = independence_table(ind, n);
    let full: usize = (1 << n) - 1;
    let mut min_base = vec![u32::MAX; 1 << n];
    let mut max_base = vec![0u32; 1 << n];
    for b in (0..=full).filter(|&b| table[b]) {
        let extendable = (0..n)
            .filter(|&e| b >> e & 1 == 0 && table[b | 1 << e])
            .fold(0usize, |acc, e| acc | 1 << e);
        // `b` is a base of exactly the sets `x` with b ⊆ x ⊆ full \ extendable.
        let free = full & !extendable & !b;
        let size = (b as u64).count_ones();
        let mut sub = free;
        loop {
            let x = b | sub;
            min_base[x] = min_base[x].min(size);
            max_base[x] = max_base[x].max(size);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    let mut worst = 1.0f64;
    for x in 0..=full {
        let (lo, hi) = (min_base[x], max_base[x]);
        if lo == u32::MAX {
            return Err(Error::Domain(format!(
                "subset mask {x:#b} has no base; the family is not downward closed"
            )));
        }
        if lo == 0 {
            if hi > 0 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        worst = worst.max(hi as f64 / lo as f64);
    }
    Ok(worst)
}

/// Exhaustively checks the k-extendible property on `ground`: for every
/// independent `A`, independent extension `B ⊋ A` and `e ∉ B` with `A + e`
/// independent, some `Y ⊆ B \ A` with `|Y| <= k` makes `B \ Y + e` independent.
pub fn verify_k_extendible(ind: &IndependenceOracle<'_>, ground: &GroundSet, k: usize) -> Result<bool> {
    let n = ground.len();
    require("verify_k_extendible", K_EXTENDIBLE_LIMIT, n)?;
    let table = independence_table(ind, n);
    let full: usize = (1 << n) - 1;
    for b in (0..=full).filter(|&b| table[b]) {
        for e in (0..n).filter(|&e| b >> e & 1 == 0) {
            let bit = 1usize << e;
            if table[b | bit] {
                continue;
            }
            let mut witnesses = Vec::new();
            let mut y = b;
            loop {
                if (y as u64).count_ones() as usize <= k && table[(b & !y) | bit] {
                    witnesses.push(y);
                }
                if y == 0 {
                    break;
                }
                y = (y - 1) & b;
            }
            // Proper subsets `a` of `b`.
            let mut a = b;
            while a != 0 {
                a = (a - 1) & b;
                if table[a] && table[a | bit] && !witnesses.iter().any(|&y| y & a == 0) {
                    return Ok(false);
                }
                if a == 0 {
                    break;
                }
            }
        }
    }
    Ok(true)
}

/// Exchange axiom: for independent `A`, `B` with `|A| < |B|` some `e ∈ B \ A`
/// keeps `A + e` independent. Holds exactly for matroids.
pub fn verify_exchange(ind: &IndependenceOracle<'_>, ground: &GroundSet) -> Result<bool> {
    let n = ground.len();
    require("verify_exchange", EXCHANGE_LIMIT, n)?;
    let table = independence_table(ind, n);
    let independent: Vec<usize> = (0..table.len()).filter(|&m| table[m]).collect();
    for &a in &independent {
        for &b in &independent {
            if a.count_ones() >= b.count_ones() {
                continue;
            }
            let diff = b & !a;
            if !(0..n).any(|e| diff >> e & 1 == 1 && table[a | 1 << e]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Size of a largest independent set and whether it is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeasibleSize {
    pub size: usize,
    /// False when only a greedy augmentation lower bound was computed.
    pub exact: bool,
}

/// `r`, the largest size of a feasible set. Exact by exhaustive search for
/// `n <= 16`; otherwise a maximal set grown in id order, flagged inexact.
pub fn max_feasible_size(ind: &IndependenceOracle<'_>, ground: &GroundSet) -> FeasibleSize {
    let candidates: Vec<ElementId> = ground.elements().collect();
    if ground.len() <= EXACT_RANK_LIMIT {
        let mut best = 0;
        let searched = for_each_independent(ind, &candidates, |s| {
            best = best.max(s.len());
            Ok(())
        });
        if searched.is_ok() {
            return FeasibleSize {
                size: best,
                exact: true,
            };
        }
    }
    let mut set = ElementSet::new();
    for e in candidates {
        set.insert(e);
        if !ind.is_independent(&set) {
            set.remove(e);
        }
    }
    FeasibleSize {
        size: set.len(),
        exact: false,
    }
}

/// Group elements into genre lists keyed by label; handy for summaries.
pub fn genre_index(genres_of: &[Vec<String>]) -> BTreeMap<String, ElementSet> {
    let mut index: BTreeMap<String, ElementSet> = BTreeMap::new();
    for (e, labels) in genres_of.iter().enumerate() {
        for label in labels {
            index.entry(label.clone()).or_default().insert(e);
        }
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;

    struct OnlyPair;

    impl IndependenceSystem for OnlyPair {
        fn is_independent(&self, set: &ElementSet) -> bool {
            set.is_empty() || set.as_slice() == [0, 1]
        }

        fn k(&self) -> usize {
            1
        }
    }

    fn two_partition_intersection(n: usize) -> IntersectionSystem {
        IntersectionSystem::new(vec![
            Box::new(PartitionMatroid::round_robin(n, 2, 1)),
            Box::new(PartitionMatroid::new((0..n).map(|e| Some(e / 2)).collect(), vec![1; n.div_ceil(2)]).unwrap()),
        ])
    }

    fn labels(rows: &[&[&str]]) -> Vec<Vec<String>> {
        rows.iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn uniform_is_downward_closed() {
        let m = UniformMatroid::new(2);
        assert!(verify_downward_closed(&IndependenceOracle::new(&m), &GroundSet::new(4)).unwrap());
    }

    #[test]
    fn constructed_violation_is_caught() {
        assert!(!verify_downward_closed(&IndependenceOracle::new(&OnlyPair), &GroundSet::new(3)).unwrap());
    }

    #[test]
    fn verifiers_refuse_large_ground_sets() {
        let m = UniformMatroid::new(2);
        let ind = IndependenceOracle::new(&m);
        assert!(matches!(
            verify_downward_closed(&ind, &GroundSet::new(21)),
            Err(Error::Capacity { .. })
        ));
        assert!(verify_k_system(&ind, &GroundSet::new(17)).is_err());
        assert!(verify_k_extendible(&ind, &GroundSet::new(17), 1).is_err());
    }

    #[test]
    fn uniform_matroid_is_one_system() {
        let m = UniformMatroid::new(3);
        assert_eq!(verify_k_system(&IndependenceOracle::new(&m), &GroundSet::new(5)).unwrap(), 1.0);
    }

    #[test]
    fn two_partition_intersection_is_two_system() {
        let sys = two_partition_intersection(6);
        let k = verify_k_system(&IndependenceOracle::new(&sys), &GroundSet::new(6)).unwrap();
        assert!(k <= 2.0, "k = {k}");
        assert!(k > 1.0);
    }

    #[test]
    fn matroids_are_one_extendible() {
        let u = UniformMatroid::new(3);
        let p = PartitionMatroid::round_robin(8, 3, 2);
        for sys in [&u as &dyn IndependenceSystem, &p] {
            let ind = IndependenceOracle::new(sys);
            assert!(verify_k_extendible(&ind, &GroundSet::new(8), 1).unwrap());
            assert!(verify_exchange(&ind, &GroundSet::new(8)).unwrap());
        }
    }

    #[test]
    fn two_matroid_intersection_is_two_extendible() {
        let sys = two_partition_intersection(8);
        let ind = IndependenceOracle::new(&sys);
        assert_eq!(ind.k(), 2);
        assert!(verify_k_extendible(&ind, &GroundSet::new(8), 2).unwrap());
        assert!(!verify_k_extendible(&ind, &GroundSet::new(8), 1).unwrap());
    }

    #[test]
    fn rank_of_uniform_matroid() {
        let m = UniformMatroid::new(7);
        let r = max_feasible_size(&IndependenceOracle::new(&m), &GroundSet::new(20));
        assert_eq!(r.size, 7);
        assert!(!r.exact);
        let r = max_feasible_size(&IndependenceOracle::new(&m), &GroundSet::new(10));
        assert_eq!(r, FeasibleSize { size: 7, exact: true });
    }

    #[test]
    fn genre_limit_binds_before_total() {
        let genres = labels(&[&["a"], &["a"], &["b"], &["b"], &["c"], &["c"]]);
        let favs: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let gc = GenreConstraint::new(&genres, &favs, 10, &[1]).unwrap();
        let r = max_feasible_size(&IndependenceOracle::new(&gc), &GroundSet::new(6));
        assert_eq!(r, FeasibleSize { size: 3, exact: true });
    }

    #[test]
    fn multi_genre_elements_count_twice() {
        let genres = labels(&[&["a", "b"], &["a"], &["b"], &["z"]]);
        let favs: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let gc = GenreConstraint::new(&genres, &favs, 5, &[1]).unwrap();
        assert!(gc.is_independent(&ElementSet::from([0])));
        assert!(!gc.is_independent(&ElementSet::from([0, 1])));
        assert!(gc.is_independent(&ElementSet::from([1, 2])));
        assert!(!gc.is_independent(&ElementSet::from([3])), "outside N_u");
        assert_eq!(gc.universe(), ElementSet::from([0, 1, 2]));
        assert_eq!(gc.k(), 2);
        assert_eq!(gc.clone().with_declared_k(3).k(), 3);
    }

    #[test]
    fn genre_constraint_matches_its_matroid_intersection() {
        let genres = labels(&[
            &["a"], &["a", "b"], &["b"], &["c"], &["a", "c"], &["x"],
            &["b", "c"], &["a", "b", "c"], &["c"], &["y"], &["b"], &["a"],
        ]);
        let favs: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        for (m, limits) in [(4, vec![1]), (3, vec![2, 1, 2]), (6, vec![2])] {
            let gc = GenreConstraint::new(&genres, &favs, m, &limits).unwrap();
            let inter = gc.as_intersection();
            assert_eq!(inter.len(), 1 + favs.len());
            let ground = GroundSet::new(12);
            for mask in 0..1u64 << 12 {
                let s = ground.subset_from_mask(mask);
                assert_eq!(gc.is_independent(&s), inter.is_independent(&s), "{s}");
            }
        }
    }

    #[test]
    fn partition_rejects_unknown_block() {
        assert!(PartitionMatroid::new(vec![Some(2)], vec![1, 1]).is_err());
    }
}
