use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A set of atoms, stored as a fixed-width bitset over `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomSet {
    universe: usize,
    words: Vec<u64>,
}

impl AtomSet {
    pub fn empty(universe: usize) -> Self {
        AtomSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, atom: u32) -> Self {
        let mut s = Self::empty(universe);
        s.insert(atom);
        s
    }

    pub fn from_atoms<I: IntoIterator<Item = u32>>(universe: usize, atoms: I) -> Self {
        let mut s = Self::empty(universe);
        for a in atoms {
            s.insert(a);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Panics if `atom` is outside the universe.
    pub fn insert(&mut self, atom: u32) {
        let a = atom as usize;
        assert!(a < self.universe, "atom {a} outside universe {}", self.universe);
        self.words[a / 64] |= 1u64 << (a % 64);
    }

    pub fn remove(&mut self, atom: u32) {
        let a = atom as usize;
        if a < self.universe {
            self.words[a / 64] &= !(1u64 << (a % 64));
        }
    }

    pub fn contains(&self, atom: u32) -> bool {
        let a = atom as usize;
        a < self.universe && self.words[a / 64] & (1u64 << (a % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &AtomSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &AtomSet) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> AtomSet {
        let mut s = self.clone();
        for w in &mut s.words {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &AtomSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros();
                self.current &= self.current - 1;
                return Some((self.index * 64) as u32 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a AtomSet {
    type Item = u32;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct AtomSetRepr {
    universe: usize,
    atoms: Vec<u32>,
}

impl Serialize for AtomSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AtomSetRepr {
            universe: self.universe,
            atoms: self.to_vec(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AtomSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = AtomSetRepr::deserialize(deserializer)?;
        if let Some(bad) = repr.atoms.iter().find(|&&a| a as usize >= repr.universe) {
            return Err(serde::de::Error::custom(format!(
                "atom {bad} outside universe {}",
                repr.universe
            )));
        }
        Ok(AtomSet::from_atoms(repr.universe, repr.atoms))
    }
}
