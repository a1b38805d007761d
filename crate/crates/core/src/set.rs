//! Dense bitset over a fixed universe `0..n`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use serde::ser::{Serialize, SerializeSeq, Serializer};

const WORD: usize = 64;

/// A subset of the ground set `0..universe`.
///
/// Membership is stored as packed `u64` words and the cardinality is cached,
/// so `len()` is O(1) and `contains` is a single shift and mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    universe: usize,
    words: Vec<u64>,
    len: usize,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            universe,
            words: alloc::vec![0; universe.div_ceil(WORD)],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for e in 0..universe {
            s.insert(e);
        }
        s
    }

    /// Builds a set from members. Panics if a member is outside the universe.
    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut s = Self::empty(universe);
        for e in members {
            s.insert(e);
        }
        s
    }

    /// Like [`ElementSet::from_members`] but reports the first out-of-range member.
    pub fn try_from_members<I: IntoIterator<Item = usize>>(
        universe: usize,
        members: I,
    ) -> Result<Self, usize> {
        let mut s = Self::empty(universe);
        for e in members {
            if e >= universe {
                return Err(e);
            }
            s.insert(e);
        }
        Ok(s)
    }

    /// Set whose members are the bits of `mask` (universe at most 64).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD, "from_mask needs a universe of at most 64");
        let mask = if universe == WORD {
            mask
        } else {
            mask & ((1u64 << universe) - 1)
        };
        let mut words = alloc::vec![0; universe.div_ceil(WORD)];
        if let Some(w) = words.first_mut() {
            *w = mask;
        }
        ElementSet {
            universe,
            words,
            len: mask.count_ones() as usize,
        }
    }

    /// Inverse of [`ElementSet::from_mask`].
    pub fn mask(&self) -> u64 {
        assert!(self.universe <= WORD, "mask needs a universe of at most 64");
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e < self.universe && self.words[e / WORD] & (1u64 << (e % WORD)) != 0
    }

    /// Adds `e`; returns whether it was newly inserted.
    ///
    /// Panics when `e` is outside the universe.
    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        assert!(
            e < self.universe,
            "element {e} outside universe of size {}",
            self.universe
        );
        let bit = 1u64 << (e % WORD);
        let w = &mut self.words[e / WORD];
        let fresh = *w & bit == 0;
        *w |= bit;
        self.len += fresh as usize;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, e: usize) -> bool {
        if e >= self.universe {
            return false;
        }
        let bit = 1u64 << (e % WORD);
        let w = &mut self.words[e / WORD];
        let present = *w & bit != 0;
        *w &= !bit;
        self.len -= present as usize;
        present
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
        self.len = 0;
    }

    /// Copy of `self` with `e` added.
    pub fn with(&self, e: usize) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.universe, other.universe, "universe mismatch");
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        ElementSet {
            universe: self.universe,
            words,
            len,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn union_with(&mut self, other: &Self) {
        *self = self.union(other);
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0)
    }

    /// Lexicographic order on the ascending member lists (a proper prefix is smaller).
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len))?;
        for e in self.iter() {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn insert_remove_tracks_len() {
        let mut s = ElementSet::empty(130);
        assert!(s.insert(0));
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_vec(), alloc::vec![0, 129]);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert!(!s.remove(500));
        assert_eq!(s.len(), 1);
        assert!(!s.contains(1000));
    }

    #[test]
    #[should_panic]
    fn insert_out_of_range_panics() {
        ElementSet::empty(3).insert(3);
    }

    #[test]
    fn try_from_members_reports_offender() {
        assert_eq!(ElementSet::try_from_members(4, [1, 7]), Err(7));
    }

    #[test]
    fn lex_order_prefers_prefixes() {
        let a = ElementSet::from_members(5, [0, 1]);
        let b = ElementSet::from_members(5, [0, 1, 4]);
        let c = ElementSet::from_members(5, [0, 2]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(b.lex_cmp(&c), Ordering::Less);
        assert_eq!(ElementSet::empty(5).lex_cmp(&a), Ordering::Less);
    }

    #[test]
    fn mask_round_trip() {
        let s = ElementSet::from_mask(6, 0b101101);
        assert_eq!(s.to_vec(), alloc::vec![0, 2, 3, 5]);
        assert_eq!(s.mask(), 0b101101);
        assert_eq!(ElementSet::from_mask(3, 0xff).len(), 3);
    }

    fn arb_pair() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>)> {
        (1usize..200).prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(0..n, 0..40),
                proptest::collection::vec(0..n, 0..40),
            )
        })
    }

    proptest! {
        #[test]
        fn union_intersection_sizes((n, a, b) in arb_pair()) {
            let a = ElementSet::from_members(n, a);
            let b = ElementSet::from_members(n, b);
            let u = a.union(&b);
            let i = a.intersection(&b);
            prop_assert_eq!(u.len() + i.len(), a.len() + b.len());
            prop_assert!(i.is_subset(&a) && a.is_subset(&u));
            prop_assert_eq!(a.difference(&b).len(), a.len() - i.len());
            prop_assert_eq!(a.iter().count(), a.len());
        }
    }
}
