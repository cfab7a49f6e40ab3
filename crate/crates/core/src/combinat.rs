//! Set partitions as restricted growth strings, and permutations.

pub use crate::bao::symmetric::{compose, permutations};

/// All partitions of `0..n` as restricted growth strings, in lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    fn go(cur: &mut Vec<u8>, max: u8, n: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur.push(b);
            go(cur, max.max(b), n, out);
            cur.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut cur = vec![0u8];
    go(&mut cur, 0, n, &mut out);
    out
}

/// Relabel block ids in order of first appearance.
pub fn canonical_rgs(labels: &[u8]) -> Vec<u8> {
    let mut seen: Vec<u8> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(p) => p as u8,
            None => {
                seen.push(*l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

pub fn block_count(rgs: &[u8]) -> usize {
    rgs.iter().max().map_or(0, |&m| m as usize + 1)
}
