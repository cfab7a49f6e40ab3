use std::collections::HashMap;

use serde::Serialize;

use super::atomset::AtomSet;
use super::structure::{CaAtomStructure, Op};

/// A finite subalgebra of the complex algebra, represented by its atoms:
/// a partition of the frame's atoms into blocks. Its elements are exactly
/// the unions of blocks.
#[derive(Clone, Debug, Serialize)]
pub struct Closure {
    pub blocks: Vec<AtomSet>,
    pub rounds: usize,
    pub fixpoint: bool,
}

impl Closure {
    pub fn contains(&self, x: &AtomSet) -> bool {
        self.blocks.iter().all(|b| x.is_subset(&b.complement()) || b.is_subset(x))
    }

    /// log2 of the number of elements.
    pub fn element_bits(&self) -> usize {
        self.blocks.len()
    }
}

fn partition_from_keys<K: std::hash::Hash + Eq>(universe: usize, keys: Vec<K>) -> Vec<AtomSet> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    let mut blocks: Vec<AtomSet> = Vec::new();
    for (a, k) in keys.into_iter().enumerate() {
        let next = ids.len();
        let id = *ids.entry(k).or_insert(next);
        if id == blocks.len() {
            blocks.push(AtomSet::empty(universe));
        }
        blocks[id].insert(a as u32);
    }
    blocks
}

fn refine(universe: usize, blocks: &[AtomSet], splitters: &[AtomSet]) -> Vec<AtomSet> {
    let mut key: Vec<(usize, Vec<u32>)> = vec![(0, Vec::new()); universe];
    for (b, block) in blocks.iter().enumerate() {
        for a in block {
            key[a as usize].0 = b;
        }
    }
    for (k, s) in splitters.iter().enumerate() {
        for a in s {
            key[a as usize].1.push(k as u32);
        }
    }
    partition_from_keys(universe, key)
}

/// Close `generators` under the Boolean operations and every operation of
/// the signature, for at most `step_bound` rounds of operation application.
pub fn term_closure(s: &CaAtomStructure, generators: &[AtomSet], step_bound: usize) -> Closure {
    let universe = s.atom_count();
    let mut splitters: Vec<AtomSet> = generators.to_vec();
    let ops = s.operations();
    for &op in &ops {
        if let Op::Diag(..) = op {
            splitters.push(s.apply_unary(op, &s.empty_set()));
        }
    }
    let mut blocks = refine(universe, &[AtomSet::full(universe)], &splitters);
    let unary: Vec<Op> = ops.into_iter().filter(|op| op.arity() == 1).collect();
    let mut rounds = 0;
    let mut fixpoint = false;
    while rounds < step_bound {
        rounds += 1;
        let images: Vec<AtomSet> = blocks
            .iter()
            .flat_map(|b| unary.iter().map(move |&op| (op, b)))
            .map(|(op, b)| s.apply_unary(op, b))
            .collect();
        let next = refine(universe, &blocks, &images);
        if next.len() == blocks.len() {
            fixpoint = true;
            break;
        }
        blocks = next;
    }
    blocks.sort_by_key(|b| b.first());
    Closure { blocks, rounds, fixpoint }
}
