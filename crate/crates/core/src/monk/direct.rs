use std::collections::HashMap;

use serde::Serialize;

use super::MonkError;
use crate::bao::{AtomSet, CaAtomStructure, Kind, Relation, Replacement, Signature};
use crate::combinat::{block_count, canonical_rgs, set_partitions};
use crate::graphs::Graph;

pub const DEFAULT_ATOM_BOUND: usize = 200_000;

/// A red-free `n`-tuple type over the Monk signature: which coordinates
/// coincide, and the `(node, colour)` label on each pair of distinct points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LabelledTuple {
    pub blocks: Vec<u8>,
    /// Label of the block pair `(p, q)`, `p < q`, listed in row-major pair order.
    pub labels: Vec<(u32, u8)>,
}

impl LabelledTuple {
    fn pair_slot(k: usize, p: usize, q: usize) -> usize {
        let (p, q) = (p.min(q), p.max(q));
        p * k - p * (p + 1) / 2 + (q - p - 1)
    }

    /// The label between coordinates `i` and `j`, or `None` when they coincide.
    pub fn label(&self, i: usize, j: usize) -> Option<(u32, u8)> {
        let (p, q) = (self.blocks[i] as usize, self.blocks[j] as usize);
        (p != q).then(|| self.labels[Self::pair_slot(block_count(&self.blocks), p, q)])
    }

    /// The tuple read through `order`: coordinate `i` of the result is coordinate `order[i]` here.
    pub fn reindex(&self, order: &[usize]) -> LabelledTuple {
        let blocks = canonical_rgs(&order.iter().map(|&i| self.blocks[i]).collect::<Vec<_>>());
        let k = block_count(&blocks);
        let mut labels = vec![(0, 0); k * k.saturating_sub(1) / 2];
        let rep: Vec<usize> = (0..k).map(|b| blocks.iter().position(|&x| x as usize == b).expect("block")).collect();
        for p in 0..k {
            for q in p + 1..k {
                labels[Self::pair_slot(k, p, q)] = self.label(order[rep[p]], order[rep[q]]).expect("distinct blocks");
            }
        }
        LabelledTuple { blocks, labels }
    }

    /// Labels and coincidences among the coordinates other than `i`.
    fn restriction(&self, n: usize, i: usize) -> Vec<Option<(u32, u8)>> {
        let mut out = Vec::new();
        for p in (0..n).filter(|&p| p != i) {
            for q in (p + 1..n).filter(|&q| q != i) {
                out.push(self.label(p, q));
            }
        }
        out
    }
}

/// Every red-free tuple type over `g` with `n` coordinates and `n` colours.
pub fn labelled_tuples(g: &Graph, n: usize, bound: usize) -> Result<Vec<LabelledTuple>, MonkError> {
    let labels: Vec<(u32, u8)> = (0..g.node_count() as u32).flat_map(|v| (0..n as u8).map(move |c| (v, c))).collect();
    let mut out = Vec::new();
    for blocks in set_partitions(n) {
        let k = block_count(&blocks);
        let slots = k * k.saturating_sub(1) / 2;
        let mut cur = vec![(0u32, 0u8); slots];
        fn go(
            g: &Graph,
            k: usize,
            labels: &[(u32, u8)],
            pos: usize,
            cur: &mut Vec<(u32, u8)>,
            blocks: &[u8],
            out: &mut Vec<LabelledTuple>,
            bound: usize,
        ) -> Result<(), MonkError> {
            if pos == cur.len() {
                if out.len() == bound {
                    return Err(MonkError::TooManyAtoms(bound));
                }
                out.push(LabelledTuple {
                    blocks: blocks.to_vec(),
                    labels: cur.clone(),
                });
                return Ok(());
            }
            for &l in labels {
                cur[pos] = l;
                if forbidden_triangle(g, k, cur, pos) {
                    continue;
                }
                go(g, k, labels, pos + 1, cur, blocks, out, bound)?;
            }
            Ok(())
        }
        go(g, k, &labels, 0, &mut cur, &blocks, &mut out, bound)?;
    }
    out.sort();
    Ok(out)
}

/// Whether a completed triangle of blocks, all of whose pair slots are at
/// most `pos`, is monochromatic with no graph edge among its nodes.
fn forbidden_triangle(g: &Graph, k: usize, cur: &[(u32, u8)], pos: usize) -> bool {
    for p in 0..k {
        for q in p + 1..k {
            for r in q + 1..k {
                let s = [
                    LabelledTuple::pair_slot(k, p, q),
                    LabelledTuple::pair_slot(k, p, r),
                    LabelledTuple::pair_slot(k, q, r),
                ];
                if s.iter().max() != Some(&pos) {
                    continue;
                }
                let [a, b, c] = s.map(|x| cur[x]);
                if a.1 == b.1 && b.1 == c.1 && g.edge_within(&[a.0, b.0, c.0]).is_none() {
                    return true;
                }
            }
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct DirectStructure {
    pub tuples: Vec<LabelledTuple>,
    pub structure: CaAtomStructure,
}

/// The polyadic-equality atom structure of red-free tuple types: `c_i`
/// relates types with the same restriction to the coordinates other than `i`,
/// `d_ij` holds where `i` and `j` coincide, and `s_ij` swaps coordinates.
pub fn build_m(g: &Graph, n: usize, bound: usize) -> Result<DirectStructure, MonkError> {
    if !(3..=4).contains(&n) {
        return Err(MonkError::Dimension(n));
    }
    let tuples = labelled_tuples(g, n, bound)?;
    let count = tuples.len();
    let index: HashMap<&LabelledTuple, u32> = tuples.iter().enumerate().map(|(k, t)| (t, k as u32)).collect();
    let cyl = (0..n)
        .map(|i| Relation::from_keys(&tuples.iter().map(|t| t.restriction(n, i)).collect::<Vec<_>>()))
        .collect();
    let mut diag = Vec::new();
    for i in 0..n {
        for j in 0..n {
            diag.push(AtomSet::from_atoms(count, (0..count as u32).filter(|&k| tuples[k as usize].label(i, j).is_none())));
        }
    }
    let mut transp = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut order: Vec<usize> = (0..n).collect();
            order.swap(i, j);
            let map = tuples.iter().map(|t| index[&t.reindex(&order)]).collect();
            transp.push(Relation::from_function(map));
        }
    }
    let structure = CaAtomStructure::new(
        Signature { dim: n, kind: Kind::PEA },
        count,
        cyl,
        Some(diag),
        Replacement::Derived,
        Some(transp),
    )?;
    Ok(DirectStructure { tuples, structure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_agree_with_matrices() {
        assert_eq!(labelled_tuples(&Graph::complete(2), 3, DEFAULT_ATOM_BOUND).unwrap().len(), 229);
        assert_eq!(labelled_tuples(&Graph::cycle(5), 3, DEFAULT_ATOM_BOUND).unwrap().len(), 3316);
    }

    #[test]
    fn bound_is_enforced() {
        assert_eq!(labelled_tuples(&Graph::cycle(5), 3, 100), Err(MonkError::TooManyAtoms(100)));
    }

    #[test]
    fn reindex_is_an_action() {
        let ts = labelled_tuples(&Graph::complete(2), 3, DEFAULT_ATOM_BOUND).unwrap();
        for t in &ts {
            assert_eq!(&t.reindex(&[0, 1, 2]), t);
            assert_eq!(&t.reindex(&[1, 0, 2]).reindex(&[1, 0, 2]), t);
            let r = t.reindex(&[2, 0, 1]);
            assert_eq!(r.label(0, 1), t.label(2, 0));
        }
    }
}
