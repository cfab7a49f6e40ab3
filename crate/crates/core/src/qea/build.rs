use std::collections::HashMap;

use super::atom::{perm_action, EtaAtom, Slot};
use super::QeaError;
use crate::bao::{AtomSet, CaAtomStructure, Kind, Relation, Replacement, Signature};
use crate::combinat::{block_count, permutations, set_partitions};
use crate::graphs::Graph;

pub const DEFAULT_ETA_BOUND: usize = 200_000;

/// The atoms `(K, ∼)` over a graph, sorted, with an index.
#[derive(Clone, Debug)]
pub struct EtaStructure {
    pub graph: Graph,
    pub dim: usize,
    pub atoms: Vec<EtaAtom>,
    index: HashMap<EtaAtom, u32>,
}

pub fn build_eta(g: &Graph, n: usize, bound: usize) -> Result<EtaStructure, QeaError> {
    if !(3..=4).contains(&n) {
        return Err(QeaError::Dimension(n));
    }
    let slots: Vec<Slot> = (0..g.node_count() as u32).flat_map(|v| (0..n as u8).map(move |c| (v, c))).collect();
    let mut atoms = Vec::new();
    let push = |atoms: &mut Vec<EtaAtom>, a: EtaAtom| {
        if atoms.len() == bound {
            return Err(QeaError::TooManyAtoms(bound));
        }
        atoms.push(a);
        Ok(())
    };
    for partition in set_partitions(n) {
        let classes = block_count(&partition);
        if classes == n {
            let total = slots.len().pow(n as u32);
            for code in 0..total {
                let mut rest = code;
                let k: Vec<Option<Slot>> = (0..n)
                    .map(|_| {
                        let s = slots[rest % slots.len()];
                        rest /= slots.len();
                        Some(s)
                    })
                    .collect();
                let nodes: Vec<u32> = k.iter().map(|s| s.expect("total").0).collect();
                if g.edge_within(&nodes).is_some() {
                    push(&mut atoms, EtaAtom { k, partition: partition.clone() })?;
                }
            }
        } else if classes + 1 == n {
            let pair: Vec<usize> = (0..n).filter(|&x| partition.iter().filter(|&&b| b == partition[x]).count() == 2).collect();
            for &s in &slots {
                let k = (0..n).map(|x| pair.contains(&x).then_some(s)).collect();
                push(&mut atoms, EtaAtom { k, partition: partition.clone() })?;
            }
        } else {
            push(
                &mut atoms,
                EtaAtom {
                    k: vec![None; n],
                    partition,
                },
            )?;
        }
    }
    atoms.sort();
    let index = atoms.iter().enumerate().map(|(k, a)| (a.clone(), k as u32)).collect();
    Ok(EtaStructure {
        graph: g.clone(),
        dim: n,
        atoms,
        index,
    })
}

impl EtaStructure {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn index_of(&self, a: &EtaAtom) -> Option<u32> {
        self.index.get(a).copied()
    }

    /// `a ≡_i b`: same `K(i)` and the same partition away from `i`.
    pub fn equiv_i(&self, a: &EtaAtom, b: &EtaAtom, i: usize) -> bool {
        a.k[i] == b.k[i] && a.partition_without(i) == b.partition_without(i)
    }

    /// `a ≡_ij b`: `K` swapped at `i, j` and equal elsewhere; the partition
    /// unchanged when `i ∼ j`, otherwise carried along the swap.
    pub fn equiv_ij(&self, a: &EtaAtom, b: &EtaAtom, i: usize, j: usize) -> bool {
        let n = self.dim;
        if b.k[i] != a.k[j] || b.k[j] != a.k[i] || (0..n).any(|x| x != i && x != j && a.k[x] != b.k[x]) {
            return false;
        }
        if a.equivalent(i, j) {
            return a.partition == b.partition;
        }
        // x ∼' y iff [i,j](x) ∼ [i,j](y)
        let swap = |x: usize| if x == i { j } else if x == j { i } else { x };
        (0..n).all(|x| (0..n).all(|y| b.equivalent(x, y) == a.equivalent(swap(x), swap(y))))
    }

    pub fn d_ij(&self, i: usize, j: usize) -> AtomSet {
        AtomSet::from_atoms(self.len(), (0..self.len() as u32).filter(|&k| self.atoms[k as usize].equivalent(i, j)))
    }

    /// Orbits of the coordinate permutations acting on atoms.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let perms = permutations(self.dim);
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<u32> = perms
                .iter()
                .map(|p| self.index_of(&perm_action(p, &self.atoms[start])).expect("closed under permutation"))
                .collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &k in &orbit {
                seen[k as usize] = true;
            }
            out.push(orbit);
        }
        out
    }
}

/// Package as a polyadic-equality atom structure. `s^i_j` is left derived as
/// `c_i(X ∩ d_ij)`; `s_ij` is the swap action.
pub fn eta_to_ca(e: &EtaStructure) -> Result<CaAtomStructure, QeaError> {
    let n = e.dim;
    let cyl = (0..n)
        .map(|i| Relation::from_keys(&e.atoms.iter().map(|a| (a.k[i], a.partition_without(i))).collect::<Vec<_>>()))
        .collect();
    let mut diag = Vec::new();
    for i in 0..n {
        for j in 0..n {
            diag.push(e.d_ij(i, j));
        }
    }
    let mut transp = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut tau: Vec<usize> = (0..n).collect();
            tau.swap(i, j);
            let map = e
                .atoms
                .iter()
                .map(|a| e.index_of(&perm_action(&tau, a)).ok_or(QeaError::NotClosed))
                .collect::<Result<Vec<u32>, _>>()?;
            transp.push(Relation::from_function(map));
        }
    }
    Ok(CaAtomStructure::new(
        Signature { dim: n, kind: Kind::PEA },
        e.len(),
        cyl,
        Some(diag),
        Replacement::Derived,
        Some(transp),
    )?)
}
