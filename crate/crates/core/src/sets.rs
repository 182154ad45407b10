//! Ground sets and canonical element sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense element identifier in `0..n`.
pub type ElementId = usize;

/// The finite universe `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.n
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e < self.n
    }

    /// The whole universe as an [`ElementSet`].
    pub fn full(&self) -> ElementSet {
        ElementSet {
            members: self.elements().collect(),
        }
    }

    /// Fails with a domain error if any member of `set` lies outside the universe.
    pub fn check_subset(&self, set: &ElementSet) -> Result<()> {
        match set.members.last() {
            Some(&e) if e >= self.n => Err(Error::Domain(format!(
                "element {e} outside ground set of size {}",
                self.n
            ))),
            _ => Ok(()),
        }
    }

    /// Materialize the subset encoded by the low `n` bits of `mask`.
    pub fn subset_from_mask(&self, mask: u64) -> ElementSet {
        ElementSet {
            members: self.elements().filter(|&e| mask >> e & 1 == 1).collect(),
        }
    }
}

/// A sorted, duplicate-free set of element identifiers.
///
/// Ordering is canonical, so derived equality, ordering and hashing are
/// deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementSet {
    members: Vec<ElementId>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from arbitrary ids; sorts and removes duplicates.
    pub fn from_unsorted<I: IntoIterator<Item = ElementId>>(ids: I) -> Self {
        let mut members: Vec<_> = ids.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    /// Insert `e`; returns false if it was already present.
    pub fn insert(&mut self, e: ElementId) -> bool {
        match self.members.binary_search(&e) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, e);
                true
            }
        }
    }

    /// Remove `e`; returns false if it was absent.
    pub fn remove(&mut self, e: ElementId) -> bool {
        match self.members.binary_search(&e) {
            Ok(pos) => {
                self.members.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    /// `self + e` as a new set.
    pub fn with(&self, e: ElementId) -> Self {
        let mut out = self.clone();
        out.insert(e);
        out
    }

    /// `self - e` as a new set.
    pub fn without(&self, e: ElementId) -> Self {
        let mut out = self.clone();
        out.remove(e);
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_unsorted(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            members: self.iter().filter(|&e| other.contains(e)).collect(),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self {
            members: self.iter().filter(|&e| !other.contains(e)).collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|e| !other.contains(e))
    }

    pub fn into_vec(self) -> Vec<ElementId> {
        self.members
    }
}

impl FromIterator<ElementId> for ElementSet {
    fn from_iter<I: IntoIterator<Item = ElementId>>(iter: I) -> Self {
        Self::from_unsorted(iter)
    }
}

impl From<Vec<ElementId>> for ElementSet {
    fn from(ids: Vec<ElementId>) -> Self {
        Self::from_unsorted(ids)
    }
}

impl<const N: usize> From<[ElementId; N]> for ElementSet {
    fn from(ids: [ElementId; N]) -> Self {
        Self::from_unsorted(ids)
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ground_set_rejects_outside_members() {
        let g = GroundSet::new(3);
        assert!(g.check_subset(&ElementSet::from([0, 2])).is_ok());
        assert!(g.check_subset(&ElementSet::from([1, 3])).is_err());
        assert_eq!(g.subset_from_mask(0b101).as_slice(), &[0, 2]);
    }

    proptest! {
        #[test]
        fn canonical_form_is_sorted_and_unique(ids in proptest::collection::vec(0usize..50, 0..40)) {
            let s = ElementSet::from_unsorted(ids.clone());
            prop_assert!(s.as_slice().windows(2).all(|w| w[0] < w[1]));
            for e in ids {
                prop_assert!(s.contains(e));
            }
        }

        #[test]
        fn insert_remove_agree_with_reference(ops in proptest::collection::vec((any::<bool>(), 0usize..20), 0..60)) {
            let mut s = ElementSet::new();
            let mut reference = std::collections::BTreeSet::new();
            for (add, e) in ops {
                if add {
                    prop_assert_eq!(s.insert(e), reference.insert(e));
                } else {
                    prop_assert_eq!(s.remove(e), reference.remove(&e));
                }
            }
            prop_assert_eq!(s.into_vec(), reference.into_iter().collect::<Vec<_>>());
        }
    }
}
