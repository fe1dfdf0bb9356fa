use std::fmt;

use crate::system::VarId;

/// A set of equation indices.
///
/// Stored as a bit vector with trailing zero words trimmed, so two sets with
/// the same members always compare (and hash) equal regardless of how they
/// were built. Builders rely on this when using sets as memoization keys.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    words: Vec<u64>,
}

impl IndexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut set = Self::new();
        for i in 0..n {
            set.insert(VarId(i));
        }
        set
    }

    /// Builds the set whose members are the set bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut set = IndexSet { words: vec![mask] };
        set.trim();
        set
    }

    pub fn contains(&self, v: VarId) -> bool {
        let (w, b) = (v.0 / 64, v.0 % 64);
        self.words.get(w).is_some_and(|word| word >> b & 1 == 1)
    }

    pub fn insert(&mut self, v: VarId) -> bool {
        let (w, b) = (v.0 / 64, v.0 % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        let fresh = self.words[w] >> b & 1 == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: VarId) -> bool {
        let (w, b) = (v.0 / 64, v.0 % 64);
        let Some(word) = self.words.get_mut(w) else {
            return false;
        };
        let present = *word >> b & 1 == 1;
        *word &= !(1 << b);
        self.trim();
        present
    }

    /// Returns `self ∪ {v}` without modifying `self`.
    pub fn with(&self, v: VarId) -> Self {
        let mut out = self.clone();
        out.insert(v);
        out
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let len = self.words.len().max(other.words.len());
        let words = (0..len)
            .map(|k| self.words.get(k).copied().unwrap_or(0) | other.words.get(k).copied().unwrap_or(0))
            .collect();
        IndexSet { words }
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        let mut out = IndexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        };
        out.trim();
        out
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(k, w)| w & !other.words.get(k).copied().unwrap_or(0) == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = VarId> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(VarId(k * 64 + b))
            })
        })
    }

    /// Largest member, if any.
    pub fn last(&self) -> Option<VarId> {
        let last = *self.words.last()?;
        Some(VarId((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize))
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl FromIterator<VarId> for IndexSet {
    fn from_iter<I: IntoIterator<Item = VarId>>(iter: I) -> Self {
        let mut set = IndexSet::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// Iterates every subset of `{0, .., n-1}`. Only sensible for small `n`.
pub fn all_subsets(n: usize) -> impl Iterator<Item = IndexSet> {
    assert!(n < 64, "subset enumeration needs n < 64");
    (0..1u64 << n).map(IndexSet::from_mask)
}
