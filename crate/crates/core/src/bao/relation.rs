use std::collections::BTreeSet;

use super::atomset::AtomSet;

/// A binary accessibility relation `R(a, b)` on atoms `0..atom_count`.
///
/// The image of a set is `{a : exists b in X with R(a, b)}`. Relations are
/// classified on construction so that the common shapes evaluate fast.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// An equivalence relation, stored as a class id per atom.
    Equivalence { class_of: Vec<u32>, classes: Vec<Vec<u32>> },
    /// `R(a, b)` iff `b = f(a)` for a total map `f`.
    Function { map: Vec<u32> },
    /// Anything else, as sorted adjacency lists in both directions.
    General { forward: Vec<Vec<u32>>, backward: Vec<Vec<u32>> },
}

impl Relation {
    /// Build an equivalence relation from a class key per atom. Classes are
    /// numbered in order of first appearance.
    pub fn from_keys<K: Eq + std::hash::Hash + Clone>(keys: &[K]) -> Relation {
        let mut ids = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(keys.len());
        let mut classes: Vec<Vec<u32>> = Vec::new();
        for (a, k) in keys.iter().enumerate() {
            let next = ids.len() as u32;
            let id = *ids.entry(k.clone()).or_insert(next);
            if id as usize == classes.len() {
                classes.push(Vec::new());
            }
            classes[id as usize].push(a as u32);
            class_of.push(id);
        }
        Relation::Equivalence { class_of, classes }
    }

    pub fn from_function(map: Vec<u32>) -> Relation {
        Relation::Function { map }
    }

    /// Build from explicit pairs, picking the tightest representation.
    pub fn from_pairs(atom_count: usize, pairs: &[(u32, u32)]) -> Relation {
        let mut forward = vec![BTreeSet::new(); atom_count];
        let mut backward = vec![BTreeSet::new(); atom_count];
        for &(a, b) in pairs {
            forward[a as usize].insert(b);
            backward[b as usize].insert(a);
        }
        let forward: Vec<Vec<u32>> = forward.into_iter().map(|s| s.into_iter().collect()).collect();
        let backward: Vec<Vec<u32>> = backward.into_iter().map(|s| s.into_iter().collect()).collect();

        if forward.iter().all(|f| f.len() == 1) {
            return Relation::Function {
                map: forward.iter().map(|f| f[0]).collect(),
            };
        }
        if is_equivalence(&forward) {
            let keys: Vec<u32> = forward.iter().map(|f| f[0]).collect();
            return Relation::from_keys(&keys);
        }
        Relation::General { forward, backward }
    }

    pub fn atom_count(&self) -> usize {
        match self {
            Relation::Equivalence { class_of, .. } => class_of.len(),
            Relation::Function { map } => map.len(),
            Relation::General { forward, .. } => forward.len(),
        }
    }

    pub fn related(&self, a: u32, b: u32) -> bool {
        match self {
            Relation::Equivalence { class_of, .. } => class_of[a as usize] == class_of[b as usize],
            Relation::Function { map } => map[a as usize] == b,
            Relation::General { forward, .. } => forward[a as usize].binary_search(&b).is_ok(),
        }
    }

    /// Atoms `b` with `R(a, b)`, ascending.
    pub fn successors(&self, a: u32) -> Vec<u32> {
        match self {
            Relation::Equivalence { class_of, classes } => classes[class_of[a as usize] as usize].clone(),
            Relation::Function { map } => vec![map[a as usize]],
            Relation::General { forward, .. } => forward[a as usize].clone(),
        }
    }

    /// `{a : exists b in x with R(a, b)}`.
    pub fn image(&self, x: &AtomSet) -> AtomSet {
        let n = self.atom_count();
        let mut out = AtomSet::empty(n);
        match self {
            Relation::Equivalence { class_of, classes } => {
                let mut seen = vec![false; classes.len()];
                for b in x {
                    let c = class_of[b as usize] as usize;
                    if !seen[c] {
                        seen[c] = true;
                        for &a in &classes[c] {
                            out.insert(a);
                        }
                    }
                }
            }
            Relation::Function { map } => {
                for (a, &fa) in map.iter().enumerate() {
                    if x.contains(fa) {
                        out.insert(a as u32);
                    }
                }
            }
            Relation::General { backward, .. } => {
                for b in x {
                    for &a in &backward[b as usize] {
                        out.insert(a);
                    }
                }
            }
        }
        out
    }

    /// All pairs in ascending order.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let n = self.atom_count() as u32;
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.successors(a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.atom_count() as u32).all(|a| self.related(a, a))
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Relation::Equivalence { .. } => true,
            _ => self.pairs().iter().all(|&(a, b)| self.related(b, a)),
        }
    }

    /// The class id of `a` when this is an equivalence.
    pub fn class_id(&self, a: u32) -> Option<u32> {
        match self {
            Relation::Equivalence { class_of, .. } => Some(class_of[a as usize]),
            _ => None,
        }
    }
}

fn is_equivalence(forward: &[Vec<u32>]) -> bool {
    for (a, succ) in forward.iter().enumerate() {
        if succ.binary_search(&(a as u32)).is_err() {
            return false;
        }
        // Every successor must have exactly the same successor list.
        for &b in succ {
            if forward[b as usize] != *succ {
                return false;
            }
        }
    }
    true
}
