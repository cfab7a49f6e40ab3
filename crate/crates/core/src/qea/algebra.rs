use rayon::prelude::*;

use super::build::EtaStructure;
use crate::bao::{AtomSet, FiniteBao, Op};

/// The algebra on all subsets of the atoms, with every operation evaluated
/// straight from the defining relations `≡_i`, `≡_ij` and `D_ij`.
pub struct EtaAlgebra<'a> {
    eta: &'a EtaStructure,
    cyl: Vec<Vec<Vec<u32>>>,
    /// `swap[i][j][a]`: the atoms `c` with `a ≡_ij c`.
    swap: Vec<Vec<Vec<Vec<u32>>>>,
    diag: Vec<AtomSet>,
}

impl<'a> EtaAlgebra<'a> {
    pub fn new(eta: &'a EtaStructure) -> Self {
        let n = eta.dim;
        let count = eta.len();
        let related = |f: &(dyn Fn(usize, usize) -> bool + Sync)| -> Vec<Vec<u32>> {
            (0..count)
                .into_par_iter()
                .map(|a| (0..count as u32).filter(|&b| f(a, b as usize)).collect())
                .collect()
        };
        let cyl = (0..n).map(|i| related(&|a, b| eta.equiv_i(&eta.atoms[a], &eta.atoms[b], i))).collect();
        let swap = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| related(&|a, b| eta.equiv_ij(&eta.atoms[a], &eta.atoms[b], i, j)))
                    .collect()
            })
            .collect();
        let diag = (0..n * n).map(|p| eta.d_ij(p / n, p % n)).collect();
        EtaAlgebra { eta, cyl, swap, diag }
    }

    fn image(&self, lists: &[Vec<u32>], x: &AtomSet) -> AtomSet {
        let mut out = AtomSet::empty(self.eta.len());
        for a in x {
            for &c in &lists[a as usize] {
                out.insert(c);
            }
        }
        out
    }
}

impl FiniteBao for EtaAlgebra<'_> {
    type Elem = AtomSet;

    fn atoms(&self) -> Vec<AtomSet> {
        (0..self.eta.len() as u32).map(|a| AtomSet::singleton(self.eta.len(), a)).collect()
    }
    fn zero(&self) -> AtomSet {
        AtomSet::empty(self.eta.len())
    }
    fn one(&self) -> AtomSet {
        AtomSet::full(self.eta.len())
    }
    fn join(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a.union(b)
    }
    fn meet(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a.intersection(b)
    }
    fn complement(&self, a: &AtomSet) -> AtomSet {
        a.complement()
    }
    fn operations(&self) -> Vec<Op> {
        let n = self.eta.dim;
        let mut ops: Vec<Op> = (0..n).map(Op::Cyl).collect();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    ops.push(Op::Diag(i, j));
                    ops.push(Op::Repl(i, j));
                }
                if i < j {
                    ops.push(Op::Transp(i, j));
                }
            }
        }
        ops
    }
    fn apply(&self, op: Op, x: &AtomSet) -> AtomSet {
        let n = self.eta.dim;
        match op {
            Op::Cyl(i) => self.image(&self.cyl[i], x),
            Op::Diag(i, j) => self.diag[i * n + j].clone(),
            Op::Transp(i, j) => self.image(&self.swap[i][j], x),
            Op::Repl(i, j) if i == j => x.clone(),
            Op::Repl(i, j) => self.image(&self.cyl[i], &x.intersection(&self.diag[i * n + j])),
        }
    }
    fn all_elements(&self) -> Option<Vec<AtomSet>> {
        let count = self.eta.len();
        (count <= 10).then(|| {
            (0..1u32 << count)
                .map(|bits| AtomSet::from_atoms(count, (0..count as u32).filter(|b| bits >> b & 1 == 1)))
                .collect()
        })
    }
}
