//! Subsets of the ground set as growable bit vectors.
//!
//! Elements are 0-based internally; the 1-based external convention is
//! applied at the parse/serialize boundary only.  Word-level operations keep
//! intersection, union, and difference cheap for every subset handled by the
//! generators and separators.

use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

/// A finite set of ground-set indices backed by 64-bit words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IndexSet {
    words: Vec<u64>,
}

impl IndexSet {
    pub fn new() -> Self {
        IndexSet { words: Vec::new() }
    }

    /// Set `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = IndexSet::new();
        for j in 0..n {
            s.insert(j);
        }
        s
    }

    pub fn from_iter_0based(it: impl IntoIterator<Item = usize>) -> Self {
        let mut s = IndexSet::new();
        for j in it {
            s.insert(j);
        }
        s
    }

    /// Low 64 elements from a mask; bit `j` encodes element `j`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = IndexSet { words: vec![mask] };
        s.trim();
        s
    }

    /// Mask view for universes of at most 64 elements.
    pub fn as_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn insert(&mut self, j: usize) {
        let w = j / WORD;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << (j % WORD);
    }

    pub fn remove(&mut self, j: usize) {
        let w = j / WORD;
        if w < self.words.len() {
            self.words[w] &= !(1u64 << (j % WORD));
            self.trim();
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        let w = j / WORD;
        w < self.words.len() && self.words[w] & (1u64 << (j % WORD)) != 0
    }

    pub fn card(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut words = vec![0u64; self.words.len().max(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) | other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = IndexSet { words };
        s.trim();
        s
    }

    pub fn intersect(&self, other: &IndexSet) -> IndexSet {
        let mut words = vec![0u64; self.words.len().min(other.words.len())];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words[i] & other.words[i];
        }
        let mut s = IndexSet { words };
        s.trim();
        s
    }

    /// Set difference `self \ other`.
    pub fn minus(&self, other: &IndexSet) -> IndexSet {
        let mut words = self.words.clone();
        for (i, w) in words.iter_mut().enumerate() {
            *w &= !other.words.get(i).copied().unwrap_or(0);
        }
        let mut s = IndexSet { words };
        s.trim();
        s
    }

    pub fn is_subset_of(&self, other: &IndexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_superset_of(&self, other: &IndexSet) -> bool {
        other.is_subset_of(self)
    }

    pub fn is_disjoint_from(&self, other: &IndexSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(&a, &b)| a & b == 0)
    }

    /// Ascending iterator over elements.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * WORD + b)
                }
            })
        })
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Elements as sorted 1-based indices (external convention).
    pub fn to_vec_1based(&self) -> Vec<usize> {
        self.iter().map(|j| j + 1).collect()
    }

    /// Builds from 1-based indices, validating the range `1..=n`.
    pub fn from_1based(indices: &[usize], n: usize) -> Result<Self, usize> {
        let mut s = IndexSet::new();
        for &j in indices {
            if j == 0 || j > n {
                return Err(j);
            }
            s.insert(j - 1);
        }
        Ok(s)
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }
}

impl Ord for IndexSet {
    /// Numeric order of the underlying bit pattern; used for deterministic
    /// tie-breaking among generated subsets.
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.words.len().max(other.words.len());
        for i in (0..len).rev() {
            let a = self.words.get(i).copied().unwrap_or(0);
            let b = other.words.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, j) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        IndexSet::from_iter_0based(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = IndexSet::from_iter_0based([0, 1, 3]);
        let b = IndexSet::from_iter_0based([1, 2]);
        assert_eq!(a.card(), 3);
        assert_eq!(a.union(&b).to_vec_1based(), vec![1, 2, 3, 4]);
        assert_eq!(a.intersect(&b).to_vec_1based(), vec![2]);
        assert_eq!(a.minus(&b).to_vec_1based(), vec![1, 4]);
        assert!(b.is_subset_of(&a.union(&b)));
        assert!(!a.is_subset_of(&b));
        assert!(a.minus(&b).is_disjoint_from(&b));
    }

    #[test]
    fn large_universe() {
        let mut s = IndexSet::new();
        s.insert(0);
        s.insert(70);
        s.insert(200);
        assert_eq!(s.card(), 3);
        assert!(s.contains(70));
        assert!(!s.contains(71));
        assert_eq!(s.to_vec_1based(), vec![1, 71, 201]);
        s.remove(200);
        assert_eq!(s.to_vec_1based(), vec![1, 71]);
        assert_eq!(s.as_mask(), None);
    }

    #[test]
    fn ordering_is_bit_pattern_numeric() {
        let a = IndexSet::from_mask(0b011);
        let b = IndexSet::from_mask(0b100);
        assert!(a < b);
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
    }

    #[test]
    fn one_based_validation() {
        assert!(IndexSet::from_1based(&[1, 5], 5).is_ok());
        assert_eq!(IndexSet::from_1based(&[0], 5), Err(0));
        assert_eq!(IndexSet::from_1based(&[6], 5), Err(6));
    }
}
