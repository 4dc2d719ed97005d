//! Fixed-universe bit sets over carrier indices.
//!
//! Carriers up to 128 elements stay inline; larger carriers spill to the heap
//! without any change in semantics.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::Elem;

const WORD: usize = u64::BITS as usize;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    universe: usize,
    words: SmallVec<[u64; 2]>,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        Self {
            universe,
            words: SmallVec::from_elem(0, universe.div_ceil(WORD).max(1)),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for x in 0..universe {
            s.insert(x);
        }
        s
    }

    pub fn singleton(universe: usize, x: Elem) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_elems<I: IntoIterator<Item = Elem>>(universe: usize, elems: I) -> Self {
        let mut s = Self::empty(universe);
        for x in elems {
            s.insert(x);
        }
        s
    }

    /// Builds the subset whose members are the set bits of `mask` (universe ≤ 64).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= WORD);
        let mut s = Self::empty(universe);
        s.words[0] = mask;
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        debug_assert!(x < self.universe);
        self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: Elem) -> bool {
        assert!(x < self.universe, "element {x} outside universe {}", self.universe);
        let w = &mut self.words[x / WORD];
        let before = *w;
        *w |= 1 << (x % WORD);
        before != *w
    }

    pub fn remove(&mut self, x: Elem) -> bool {
        assert!(x < self.universe);
        let w = &mut self.words[x / WORD];
        let before = *w;
        *w &= !(1 << (x % WORD));
        before != *w
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn union_with(&mut self, other: &Subset) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn union(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<Elem> {
        self.iter().next()
    }
}

/// Size first, then lexicographic on the bit pattern read from index 0 upward
/// (a set containing the smaller index sorts first).
impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let a = self.to_vec();
            let b = other.to_vec();
            a.cmp(&b)
        })
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = Subset::empty(10);
        assert!(a.insert(3));
        assert!(!a.insert(3));
        a.insert(7);
        assert_eq!(a.to_vec(), vec![3, 7]);
        let b = Subset::from_elems(10, [3, 4]);
        assert_eq!(a.union(&b).to_vec(), vec![3, 4, 7]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert!(Subset::singleton(10, 3).is_subset(&a));
        assert!(!b.is_subset(&a));
    }

    #[test]
    fn multiword_universe() {
        let mut a = Subset::empty(200);
        a.insert(0);
        a.insert(64);
        a.insert(199);
        assert_eq!(a.len(), 3);
        assert_eq!(a.to_vec(), vec![0, 64, 199]);
        assert!(Subset::full(200).is_full());
        assert!(a.is_subset(&Subset::full(200)));
    }

    #[test]
    fn ordering_is_size_then_pattern() {
        let a = Subset::from_elems(4, [0, 3]);
        let b = Subset::from_elems(4, [1, 2]);
        let c = Subset::from_elems(4, [2]);
        let mut v = vec![a.clone(), b.clone(), c.clone()];
        v.sort();
        assert_eq!(v, vec![c, a, b]);
    }
}
