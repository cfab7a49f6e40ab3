use rayon::prelude::*;
use serde::Serialize;

use super::atom::perm_action;
use super::build::EtaStructure;
use crate::combinat::permutations;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaWitness {
    pub item: u8,
    pub i: usize,
    pub j: usize,
    pub atoms: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    pub failures: Vec<LemmaWitness>,
    pub pairs_checked: u64,
}

impl Lemma2Report {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `successors[a]` under `≡_ij`, by testing every pair against the definition.
fn swap_relation(e: &EtaStructure, i: usize, j: usize) -> Vec<Vec<u32>> {
    (0..e.len())
        .into_par_iter()
        .map(|a| {
            (0..e.len() as u32)
                .filter(|&b| e.equiv_ij(&e.atoms[a], &e.atoms[b as usize], i, j))
                .collect()
        })
        .collect()
}

/// Items 1 to 5 of the frame laws for `≡_i` and `≡_ij`, each checked over
/// all atoms (pairs for 1 to 3, the existential of 4 by direct search).
pub fn check_lemma2(e: &EtaStructure) -> Lemma2Report {
    let n = e.dim;
    let count = e.len();
    let mut failures = Vec::new();
    let mut pairs_checked = 0u64;
    let swaps: Vec<Vec<Vec<Vec<u32>>>> = (0..n).map(|i| (0..n).map(|j| swap_relation(e, i, j)).collect()).collect();
    pairs_checked += (n * n * count * count) as u64;

    for i in 0..n {
        // 1: ≡_ii is equality
        if let Some(a) = (0..count).find(|&a| swaps[i][i][a] != [a as u32]) {
            failures.push(LemmaWitness {
                item: 1,
                i,
                j: i,
                atoms: vec![a as u32],
            });
        }
        for j in 0..n {
            // 2: symmetric in the indices
            if let Some(a) = (0..count).find(|&a| swaps[i][j][a] != swaps[j][i][a]) {
                failures.push(LemmaWitness {
                    item: 2,
                    i,
                    j,
                    atoms: vec![a as u32],
                });
            }
            // 3: functional
            if let Some(a) = (0..count).find(|&a| swaps[i][j][a].len() > 1) {
                failures.push(LemmaWitness {
                    item: 3,
                    i,
                    j,
                    atoms: std::iter::once(a as u32).chain(swaps[i][j][a].iter().copied()).collect(),
                });
            }
            // 5: the swap maps the atom set onto itself
            let mut hit = vec![false; count];
            for list in &swaps[i][j] {
                for &b in list {
                    hit[b as usize] = true;
                }
            }
            if let Some(b) = hit.iter().position(|&h| !h) {
                failures.push(LemmaWitness {
                    item: 5,
                    i,
                    j,
                    atoms: vec![b as u32],
                });
            }
            if i == j {
                continue;
            }
            // 4: for a ∈ D_ij, a ≡_i a' iff some a1 has a ≡_j a1 and a' ≡_ij a1
            let bad = (0..count).into_par_iter().find_map_first(|a| {
                let atom = &e.atoms[a];
                if !atom.equivalent(i, j) {
                    return None;
                }
                let via_j: Vec<usize> = (0..count).filter(|&x| e.equiv_i(atom, &e.atoms[x], j)).collect();
                (0..count).find_map(|b| {
                    let left = e.equiv_i(atom, &e.atoms[b], i);
                    let right = swaps[i][j][b].iter().any(|c| via_j.binary_search(&(*c as usize)).is_ok());
                    (left != right).then(|| vec![a as u32, b as u32])
                })
            });
            if let Some(atoms) = bad {
                failures.push(LemmaWitness { item: 4, i, j, atoms });
            }
        }
    }
    Lemma2Report { failures, pairs_checked }
}

/// Every coordinate permutation maps atoms to atoms, and the action composes.
pub fn check_lemma1(e: &EtaStructure) -> Option<(Vec<usize>, u32)> {
    let perms = permutations(e.dim);
    for p in &perms {
        for (k, a) in e.atoms.iter().enumerate() {
            let image = perm_action(p, a);
            if !image.is_valid(&e.graph) || e.index_of(&image).is_none() {
                return Some((p.clone(), k as u32));
            }
        }
    }
    None
}
