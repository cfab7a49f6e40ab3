use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::alpha::{check_ra_atomstructure, RaAtomStructure};
use super::MonkError;
use crate::bao::{AtomSet, CaAtomStructure, Kind, Relation, Replacement, Signature};

/// A matrix of at most 4x4 atoms below 256, one byte per entry, row-major
/// from the most significant byte so numeric order is lexicographic order.
pub type MatrixKey = u128;

pub fn pack(n: usize, m: &[u32]) -> MatrixKey {
    m.iter().enumerate().fold(0, |acc, (e, &a)| acc | (a as u128) << (8 * (n * n - 1 - e)))
}

pub fn unpack(n: usize, key: MatrixKey) -> Vec<u32> {
    (0..n * n).map(|e| (key >> (8 * (n * n - 1 - e)) & 0xFF) as u32).collect()
}

fn entry(n: usize, key: MatrixKey, i: usize, j: usize) -> u32 {
    (key >> (8 * (n * n - 1 - (i * n + j))) & 0xFF) as u32
}

/// The basic matrices of an RA atom structure, sorted, with the cylindric
/// atom structure they carry. Atom `k` of the structure is `keys[k]`.
#[derive(Clone, Debug)]
pub struct BasicMatrices {
    pub dim: usize,
    pub keys: Vec<MatrixKey>,
    pub structure: CaAtomStructure,
}

impl BasicMatrices {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn matrix(&self, k: usize) -> Vec<u32> {
        unpack(self.dim, self.keys[k])
    }

    pub fn entry(&self, k: usize, i: usize, j: usize) -> u32 {
        entry(self.dim, self.keys[k], i, j)
    }

    pub fn index_of(&self, m: &[u32]) -> Option<u32> {
        self.keys.binary_search(&pack(self.dim, m)).ok().map(|k| k as u32)
    }
}

/// `m` is coherent when every diagonal entry is an identity atom, entries
/// are converse-symmetric, and `m_ik ≤ m_ij ; m_jk` for all `i, j, k`.
pub fn is_coherent(ras: &RaAtomStructure, n: usize, m: &[u32]) -> bool {
    (0..n).all(|i| ras.is_identity(m[i * n + i]))
        && (0..n).all(|i| (0..n).all(|j| m[j * n + i] == ras.converse(m[i * n + j])))
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| ras.consistent(m[i * n + j], m[j * n + k], m[i * n + k]))))
}

/// All coherent `n x n` matrices, by filling columns left to right and
/// checking every triangle as soon as its entries are known.
pub fn enumerate_matrices(ras: &RaAtomStructure, n: usize) -> Vec<Vec<u32>> {
    enumerate_keys(ras, n).into_iter().map(|k| unpack(n, k)).collect()
}

fn enumerate_keys(ras: &RaAtomStructure, n: usize) -> Vec<MatrixKey> {
    assert!(n <= 4 && ras.atom_count() <= 256, "packed matrices hold at most 4x4 entries below 256");
    let identity = ras.identity_atoms().first().copied().unwrap_or(0);
    // off-diagonal upper entries in column order: (0,1), (0,2), (1,2), (0,3), ...
    let slots: Vec<(usize, usize)> = (1..n).flat_map(|k| (0..k).map(move |r| (r, k))).collect();
    let mut base = vec![u32::MAX; n * n];
    for i in 0..n {
        base[i * n + i] = identity;
    }
    fn go(ras: &RaAtomStructure, n: usize, slots: &[(usize, usize)], pos: usize, m: &mut Vec<u32>, out: &mut Vec<MatrixKey>) {
        let Some(&(r, k)) = slots.get(pos) else {
            out.push(pack(n, m));
            return;
        };
        for a in 0..ras.atom_count() as u32 {
            m[r * n + k] = a;
            m[k * n + r] = ras.converse(a);
            if triangles_ok(ras, n, m, r, k) {
                go(ras, n, slots, pos + 1, m, out);
            }
        }
        m[r * n + k] = u32::MAX;
        m[k * n + r] = u32::MAX;
    }
    // split on the first entry so the work parallelizes
    let mut out: Vec<MatrixKey> = (0..ras.atom_count() as u32)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut m = base.clone();
            let mut out = Vec::new();
            m[1] = a;
            m[n] = ras.converse(a);
            if triangles_ok(ras, n, &m, 0, 1) {
                go(ras, n, &slots, 1, &mut m, &mut out);
            }
            out
        })
        .collect();
    out.sort_unstable();
    out
}

/// Every fully known triangle through the pair `(r, k)`.
fn triangles_ok(ras: &RaAtomStructure, n: usize, m: &[u32], r: usize, k: usize) -> bool {
    let known = |i: usize, j: usize| m[i * n + j] != u32::MAX;
    for t in 0..n {
        let idx = [r, k, t];
        for &i in &idx {
            for &j in &idx {
                for &l in &idx {
                    if known(i, j) && known(j, l) && known(i, l) && !ras.consistent(m[i * n + j], m[j * n + l], m[i * n + l]) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Swap rows and columns `i` and `j`.
pub fn transpose(n: usize, m: &[u32], i: usize, j: usize) -> Vec<u32> {
    let swap = |x: usize| if x == i { j } else if x == j { i } else { x };
    let mut out = vec![0; n * n];
    for p in 0..n {
        for q in 0..n {
            out[p * n + q] = m[swap(p) * n + swap(q)];
        }
    }
    out
}

fn transpose_key(n: usize, key: MatrixKey, i: usize, j: usize) -> MatrixKey {
    let swap = |x: usize| if x == i { j } else if x == j { i } else { x };
    let mut out = 0;
    for p in 0..n {
        for q in 0..n {
            out |= (entry(n, key, swap(p), swap(q)) as u128) << (8 * (n * n - 1 - (p * n + q)));
        }
    }
    out
}

/// The key with row and column `i` blanked out.
fn off_key(n: usize, key: MatrixKey, i: usize) -> MatrixKey {
    let mut mask: u128 = 0;
    for e in 0..n * n {
        if e / n == i || e % n == i {
            mask |= 0xFF << (8 * (n * n - 1 - e));
        }
    }
    key & !mask
}

/// The polyadic-equality atom structure on `Mat_n`: `c_i` relates matrices
/// agreeing off row and column `i`, `d_ij` holds where `m_ij` is an identity
/// atom, and `s_ij` swaps rows and columns `i, j`.
pub fn basic_matrices(ras: &RaAtomStructure, n: usize) -> Result<BasicMatrices, MonkError> {
    let report = check_ra_atomstructure(ras);
    if !report.pass() {
        return Err(MonkError::NotAnAtomStructure(report));
    }
    basic_matrices_unchecked(ras, n)
}

/// As [`basic_matrices`] without validating the RA laws first.
pub fn basic_matrices_unchecked(ras: &RaAtomStructure, n: usize) -> Result<BasicMatrices, MonkError> {
    if !(3..=4).contains(&n) {
        return Err(MonkError::Dimension(n));
    }
    basic_matrices_from(ras, n, enumerate_keys(ras, n))
}

/// The structure carried by a given set of matrices, which must be closed
/// under transposition.
pub fn basic_matrices_from(ras: &RaAtomStructure, n: usize, mut keys: Vec<MatrixKey>) -> Result<BasicMatrices, MonkError> {
    if !(3..=4).contains(&n) {
        return Err(MonkError::Dimension(n));
    }
    keys.sort_unstable();
    keys.dedup();
    if keys.is_empty() {
        return Err(MonkError::Empty);
    }
    let count = keys.len();
    let cyl = (0..n)
        .map(|i| Relation::from_keys(&keys.par_iter().map(|&k| off_key(n, k, i)).collect::<Vec<_>>()))
        .collect();
    let mut diag = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            diag.push(AtomSet::from_atoms(
                count,
                (0..count as u32).filter(|&k| ras.is_identity(entry(n, keys[k as usize], i, j))),
            ));
        }
    }
    let mut transp = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let map: Option<Vec<u32>> = keys
                .par_iter()
                .map(|&k| keys.binary_search(&transpose_key(n, k, i, j)).ok().map(|x| x as u32))
                .collect();
            transp.push(Relation::from_function(map.ok_or(MonkError::NotClosed { i, j })?));
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
    Ok(BasicMatrices { dim: n, keys, structure })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFailure {
    pub matrix: Vec<u32>,
    pub x: usize,
    pub y: usize,
    pub a: u32,
    pub b: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    /// An atom that is not `m_01` of any matrix.
    pub missing_atom: Option<u32>,
    /// A demand `m_xy ≤ a ; b` with no matrix `m' ≡_z m` having `m'_xz = a`, `m'_zy = b`.
    pub witness_failure: Option<WitnessFailure>,
    /// A matrix whose `(i, j)` transpose is not a basic matrix.
    pub substitution_failure: Option<(Vec<u32>, usize, usize)>,
    pub demands_checked: u64,
}

impl BasisReport {
    pub fn pass(&self) -> bool {
        self.missing_atom.is_none() && self.witness_failure.is_none() && self.substitution_failure.is_none()
    }
}

/// A set of atom pairs `(a, b)` as a bitmap indexed `a * atoms + b`.
type PairSet = Vec<u64>;

fn pair_bit(atoms: usize, a: u32, b: u32) -> (usize, u64) {
    let k = a as usize * atoms + b as usize;
    (k / 64, 1 << (k % 64))
}

/// Check that the matrices form a polyadic basis: every atom occurs, every
/// composition demand has a witness, and the set is closed under transposition.
pub fn check_cylindric_basis(mats: &BasicMatrices, ras: &RaAtomStructure) -> BasisReport {
    let n = mats.dim;
    let atoms = ras.atom_count();
    let words = (atoms * atoms).div_ceil(64);
    let present: HashSet<u32> = (0..mats.len()).map(|k| mats.entry(k, 0, 1)).collect();
    let missing_atom = (0..atoms as u32).find(|a| !present.contains(a));

    let substitution_failure = (0..mats.len()).into_par_iter().find_map_first(|k| {
        for i in 0..n {
            for j in i + 1..n {
                if mats.keys.binary_search(&transpose_key(n, mats.keys[k], i, j)).is_err() {
                    return Some((mats.matrix(k), i, j));
                }
            }
        }
        None
    });

    // demand[c] = {(a, b) : c ≤ a ; b}
    let demand: Vec<PairSet> = (0..atoms as u32)
        .map(|c| {
            let mut set = vec![0u64; words];
            for a in 0..atoms as u32 {
                for b in 0..atoms as u32 {
                    if ras.consistent(a, b, c) {
                        let (w, bit) = pair_bit(atoms, a, b);
                        set[w] |= bit;
                    }
                }
            }
            set
        })
        .collect();

    // realized[z].1[class off z][x * n + y]: the pairs (m'_xz, m'_zy) over that class
    let realized: Vec<(Vec<u32>, Vec<Vec<PairSet>>)> = (0..n)
        .map(|z| {
            let cyl = mats.structure.cyl(z);
            let class: Vec<u32> = (0..mats.len() as u32).map(|k| cyl.class_id(k).expect("equivalence")).collect();
            let classes = class.iter().max().map_or(0, |&c| c as usize + 1);
            let mut table = vec![vec![vec![0u64; words]; n * n]; classes];
            for k in 0..mats.len() {
                let row = &mut table[class[k] as usize];
                for x in (0..n).filter(|&x| x != z) {
                    for y in (0..n).filter(|&y| y != z && y != x) {
                        let (w, bit) = pair_bit(atoms, mats.entry(k, x, z), mats.entry(k, z, y));
                        row[x * n + y][w] |= bit;
                    }
                }
            }
            (class, table)
        })
        .collect();

    let failure = (0..mats.len()).into_par_iter().find_map_first(|k| {
        for x in 0..n {
            for y in (0..n).filter(|&y| y != x) {
                let mut unmet = demand[mats.entry(k, x, y) as usize].clone();
                for z in (0..n).filter(|&z| z != x && z != y) {
                    let (class, table) = &realized[z];
                    for (u, have) in unmet.iter_mut().zip(&table[class[k] as usize][x * n + y]) {
                        *u &= !have;
                    }
                }
                if let Some(w) = unmet.iter().position(|&u| u != 0) {
                    let p = w * 64 + unmet[w].trailing_zeros() as usize;
                    return Some(WitnessFailure {
                        matrix: mats.matrix(k),
                        x,
                        y,
                        a: (p / atoms) as u32,
                        b: (p % atoms) as u32,
                    });
                }
            }
        }
        None
    });
    let demands_checked = (0..mats.len())
        .into_par_iter()
        .map(|k| {
            let mut c = 0u64;
            for x in 0..n {
                for y in (0..n).filter(|&y| y != x) {
                    c += demand[mats.entry(k, x, y) as usize].iter().map(|w| w.count_ones() as u64).sum::<u64>();
                }
            }
            c
        })
        .sum();
    BasisReport {
        missing_atom,
        witness_failure: failure,
        substitution_failure,
        demands_checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::monk::alpha::build_alpha;

    /// Every symmetric-by-converse matrix with identity diagonal, filtered by coherence.
    fn brute_matrices(ras: &RaAtomStructure, n: usize) -> Vec<Vec<u32>> {
        let upper: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let atoms = ras.atom_count() as u64;
        let total = atoms.pow(upper.len() as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut m = vec![0u32; n * n];
            let mut rest = code;
            for &(i, j) in &upper {
                let a = (rest % atoms) as u32;
                rest /= atoms;
                m[i * n + j] = a;
                m[j * n + i] = ras.converse(a);
            }
            if is_coherent(ras, n, &m) {
                out.push(m);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for g in [Graph::complete(2), Graph::cycle(5), Graph::complete(3), Graph::empty(2)] {
            let ras = build_alpha(&g, 3).unwrap();
            assert_eq!(enumerate_matrices(&ras, 3), brute_matrices(&ras, 3));
        }
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        assert_eq!(enumerate_matrices(&ras, 4), brute_matrices(&ras, 4));
    }

    #[test]
    fn known_counts() {
        let count = |g: Graph| enumerate_matrices(&build_alpha(&g, 3).unwrap(), 3).len();
        assert_eq!(count(Graph::complete(2)), 229);
        assert_eq!(count(Graph::complete(3)), 748);
        assert_eq!(count(Graph::cycle(5)), 3316);
    }

    #[test]
    fn structure_relations() {
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        let mats = basic_matrices(&ras, 3).unwrap();
        let s = &mats.structure;
        for k in 0..mats.len() {
            let m = mats.matrix(k);
            assert_eq!(s.diagonal(0, 1).unwrap().contains(k as u32), m[1] == 0);
            assert!(is_coherent(&ras, 3, &m));
            assert_eq!(mats.index_of(&m), Some(k as u32));
        }
        // c_0 of a singleton: matrices agreeing off row/column 0
        let k = 57u32;
        let image = s.apply_unary(crate::bao::Op::Cyl(0), &AtomSet::singleton(s.atom_count(), k));
        let m = mats.matrix(k as usize);
        for j in 0..mats.len() {
            assert_eq!(image.contains(j as u32), mats.matrix(j)[5] == m[5]);
        }
    }

    #[test]
    fn monk_matrices_form_a_basis() {
        let ras = build_alpha(&Graph::cycle(5), 3).unwrap();
        let r = check_cylindric_basis(&basic_matrices(&ras, 3).unwrap(), &ras);
        assert!(r.pass(), "{r:?}");
        let ras = build_alpha(&Graph::complete(3), 4).unwrap();
        let r = check_cylindric_basis(&basic_matrices(&ras, 4).unwrap(), &ras);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn unembeddable_atom_fails_first_condition() {
        let base = build_alpha(&Graph::complete(2), 3).unwrap();
        let dead = base.atom_count() as u32;
        let ras = RaAtomStructure::from_predicate(
            base.atom_count() + 1,
            vec![0],
            (0..=dead).collect(),
            |a, b, c| a != dead && b != dead && c != dead && base.consistent(a, b, c),
        )
        .unwrap();
        assert!(basic_matrices(&ras, 3).is_err());
        let mats = basic_matrices_unchecked(&ras, 3).unwrap();
        assert_eq!(check_cylindric_basis(&mats, &ras).missing_atom, Some(dead));
    }
}
