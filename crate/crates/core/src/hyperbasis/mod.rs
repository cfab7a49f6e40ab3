//! Hypernetworks lifted from basic matrices, hyperbasis checking and
//! search, the step-by-step relativized model builder and the square and
//! smooth audits of its output.

mod check;
mod model;
mod search;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use check::{check_hyperbasis, check_hypernet, check_hypernet_ca, Bullet, CheckMode, HyperBasisReport, HyperFailure};
pub use model::{build_model, check_smooth, check_square, Defect, DefectSet, Embedding, ModelError, ModelRun, RelModel, SmoothReport, SquareReport, StageReport};
pub use search::{search_hyperbasis, SearchOutcome};

/// An `n`-wide hypernetwork on nodes `0..m` over a relation algebra: atoms
/// on pairs (`j = m − 1 = 2` when `m = 3`) and labels from `Λ = 0..lambda`
/// on the other tuples of length at most `n`. Tuples missing from `hyper`
/// carry `λ_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HyperNet {
    pub m: usize,
    pub n: usize,
    /// `atoms[x * m + y]`.
    pub atoms: Vec<u32>,
    pub hyper: BTreeMap<Vec<u8>, u32>,
}

impl HyperNet {
    /// A basic matrix with every hyperlabel `λ_0`.
    pub fn lift(m: usize, matrix: &[u32]) -> HyperNet {
        assert_eq!(matrix.len(), m * m);
        HyperNet {
            m,
            n: m,
            atoms: matrix.to_vec(),
            hyper: BTreeMap::new(),
        }
    }

    /// A basic matrix with every hyperlabel equal to `lambda`.
    pub fn lift_constant(m: usize, matrix: &[u32], lambda: u32) -> HyperNet {
        let mut h = HyperNet::lift(m, matrix);
        if lambda != 0 {
            for t in hyper_tuples(m, m) {
                h.hyper.insert(t, lambda);
            }
        }
        h
    }

    pub fn atom(&self, x: usize, y: usize) -> u32 {
        self.atoms[x * self.m + y]
    }

    pub fn hyperlabel(&self, t: &[u8]) -> u32 {
        self.hyper.get(t).copied().unwrap_or(0)
    }

    /// `N ∘ σ` for a map `σ : m → m`.
    pub fn compose(&self, sigma: &[usize]) -> HyperNet {
        let m = self.m;
        let atoms = (0..m * m).map(|e| self.atom(sigma[e / m], sigma[e % m])).collect();
        let mut hyper = BTreeMap::new();
        for t in hyper_tuples(m, self.n) {
            let image: Vec<u8> = t.iter().map(|&x| sigma[x as usize] as u8).collect();
            let l = self.hyperlabel(&image);
            if l != 0 {
                hyper.insert(t, l);
            }
        }
        HyperNet { m, n: self.n, atoms, hyper }
    }

    /// The part of `N` on tuples avoiding every node in `skip`.
    pub fn restriction_key(&self, skip: &[usize]) -> (Vec<u32>, Vec<(Vec<u8>, u32)>) {
        let m = self.m;
        let atoms = (0..m * m)
            .map(|e| if skip.contains(&(e / m)) || skip.contains(&(e % m)) { u32::MAX } else { self.atoms[e] })
            .collect();
        let hyper = self
            .hyper
            .iter()
            .filter(|(t, _)| t.iter().all(|&x| !skip.contains(&(x as usize))))
            .map(|(t, &l)| (t.clone(), l))
            .collect();
        (atoms, hyper)
    }

    pub fn matrix(&self) -> &[u32] {
        &self.atoms
    }
}

/// Every tuple over `0..m` of length `1..=n` other than 2.
pub fn hyper_tuples(m: usize, n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for len in (1..=n).filter(|&l| l != 2) {
        for mut idx in 0..m.pow(len as u32) {
            let mut t = Vec::with_capacity(len);
            for _ in 0..len {
                t.push((idx % m) as u8);
                idx /= m;
            }
            out.push(t);
        }
    }
    out
}

/// Every map `m → m`.
pub fn all_maps(m: usize) -> Vec<Vec<usize>> {
    (0..m.pow(m as u32))
        .map(|mut idx| {
            (0..m)
                .map(|_| {
                    let x = idx % m;
                    idx /= m;
                    x
                })
                .collect()
        })
        .collect()
}
