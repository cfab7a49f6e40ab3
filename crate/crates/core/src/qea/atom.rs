use serde::{Deserialize, Serialize};

use crate::combinat::{block_count, canonical_rgs};
use crate::graphs::Graph;

/// A point of `Γ × n`: a graph node and a colour.
pub type Slot = (u32, u8);

/// A pair `(K, ∼)`: a partial map from coordinates to `Γ × n` and an
/// equivalence on the coordinates, as a restricted growth string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaAtom {
    pub k: Vec<Option<Slot>>,
    pub partition: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaAtomJson {
    #[serde(rename = "K")]
    pub k: Vec<[u32; 3]>,
    pub partition: String,
}

impl EtaAtom {
    pub fn dim(&self) -> usize {
        self.partition.len()
    }

    pub fn equivalent(&self, i: usize, j: usize) -> bool {
        self.partition[i] == self.partition[j]
    }

    /// The partition restricted to every coordinate except `i`.
    pub fn partition_without(&self, i: usize) -> Vec<u8> {
        let rest: Vec<u8> = (0..self.dim()).filter(|&x| x != i).map(|x| self.partition[x]).collect();
        canonical_rgs(&rest)
    }

    /// Whether the atom satisfies the three membership clauses for `g`.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let n = self.dim();
        if self.k.len() != n || canonical_rgs(&self.partition) != self.partition {
            return false;
        }
        if self.k.iter().flatten().any(|&(v, c)| v as usize >= g.node_count() || c as usize >= n) {
            return false;
        }
        let classes = block_count(&self.partition);
        if classes == n {
            let Some(nodes) = self.k.iter().map(|s| s.map(|(v, _)| v)).collect::<Option<Vec<u32>>>() else {
                return false;
            };
            // projected to Γ, the range must span an edge
            g.edge_within(&nodes).is_some()
        } else if classes + 1 == n {
            let pair: Vec<usize> = (0..n).filter(|&x| (0..n).any(|y| y != x && self.equivalent(x, y))).collect();
            let [i, j] = pair[..] else { return false };
            (0..n).all(|x| self.k[x].is_some() == (x == i || x == j)) && self.k[i] == self.k[j]
        } else {
            self.k.iter().all(Option::is_none)
        }
    }

    pub fn to_json(&self) -> EtaAtomJson {
        EtaAtomJson {
            k: self
                .k
                .iter()
                .enumerate()
                .filter_map(|(x, s)| s.map(|(v, c)| [x as u32, v, c as u32]))
                .collect(),
            partition: self.partition.iter().map(|b| char::from(b'0' + b)).collect(),
        }
    }

    pub fn from_json(j: &EtaAtomJson) -> Option<EtaAtom> {
        let partition: Vec<u8> = j.partition.bytes().map(|b| b.checked_sub(b'0')).collect::<Option<_>>()?;
        let mut k = vec![None; partition.len()];
        for &[x, v, c] in &j.k {
            *k.get_mut(x as usize)? = Some((v, u8::try_from(c).ok()?));
        }
        Some(EtaAtom { k, partition })
    }
}

/// `τ(K, ∼) = (K ∘ τ, ∼ ∘ τ)`: coordinate `x` of the result reads coordinate `τ(x)`.
pub fn perm_action(tau: &[usize], a: &EtaAtom) -> EtaAtom {
    EtaAtom {
        k: tau.iter().map(|&t| a.k[t]).collect(),
        partition: canonical_rgs(&tau.iter().map(|&t| a.partition[t]).collect::<Vec<_>>()),
    }
}
