use std::collections::{HashMap, HashSet};

use serde::Serialize;

use super::{all_maps, hyper_tuples, HyperNet};
use crate::games::{check_network, Frame, Hypernetwork, NetworkViolation};
use crate::monk::RaAtomStructure;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HyperFailure {
    pub condition: &'static str,
    pub tuple: Vec<usize>,
}

fn fail(condition: &'static str, tuple: Vec<usize>) -> Result<(), HyperFailure> {
    Err(HyperFailure { condition, tuple })
}

/// Check the defining conditions of a hypernetwork over an RA atom
/// structure, exhaustively over tuples.
pub fn check_hypernet(ras: &RaAtomStructure, h: &HyperNet, lambda: u32) -> Result<(), HyperFailure> {
    let m = h.m;
    if m < 3 || m > h.n || h.atoms.len() != m * m {
        return fail("parameters", vec![m, h.n]);
    }
    if let Some(x) = h.atoms.iter().position(|&a| a as usize >= ras.atom_count()) {
        return fail("atoms", vec![x / m, x % m]);
    }
    for x in 0..m {
        if !ras.is_identity(h.atom(x, x)) {
            return fail("diagonal", vec![x, x]);
        }
    }
    for x in 0..m {
        for y in 0..m {
            if h.atom(y, x) != ras.converse(h.atom(x, y)) {
                return fail("transposition", vec![x, y]);
            }
            for z in 0..m {
                if !ras.consistent(h.atom(x, z), h.atom(z, y), h.atom(x, y)) {
                    return fail("substitution", vec![x, y, z]);
                }
            }
        }
    }
    for (t, &l) in &h.hyper {
        if l >= lambda || t.len() == 2 || t.len() > h.n || t.iter().any(|&x| x as usize >= m) {
            return fail("hyperlabel", t.iter().map(|&x| x as usize).collect());
        }
    }
    // x̄ ∼ ȳ when every x_i, y_i are joined by an identity atom; a clash
    // involves at least one tuple off the default label
    let tuples = hyper_tuples(m, h.n);
    for t in h.hyper.iter().filter(|(_, &l)| l != 0).map(|(t, _)| t) {
        for u in tuples.iter().filter(|u| u.len() == t.len()) {
            let similar = t.iter().zip(u).all(|(&a, &b)| ras.is_identity(h.atom(a as usize, b as usize)));
            if similar && h.hyperlabel(t) != h.hyperlabel(u) {
                return fail("hyperlabel", t.iter().map(|&x| x as usize).collect());
            }
        }
    }
    Ok(())
}

/// The cylindric-native reading (`j = m`): a network on `m` nodes over a
/// cylindric atom structure, with hyperlabels below `lambda`.
pub fn check_hypernet_ca(frame: &Frame, h: &Hypernetwork, lambda: u32) -> Result<(), HyperFailure> {
    let tuple_of = |v: &NetworkViolation| match v {
        NetworkViolation::Shape => ("parameters", Vec::new()),
        NetworkViolation::Unlabelled(t) => ("atoms", t.clone()),
        NetworkViolation::Diagonal { tuple, .. } => ("diagonal", tuple.clone()),
        NetworkViolation::Cylindrifier { tuple, .. } => ("substitution", tuple.clone()),
        NetworkViolation::Transposition { tuple, .. } => ("transposition", tuple.clone()),
    };
    if let Err(v) = check_network(frame, &h.net) {
        let (c, t) = tuple_of(&v);
        return fail(c, t);
    }
    if let Err(v) = h.check(frame, lambda) {
        let (_, t) = tuple_of(&v);
        return fail("hyperlabel", t);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bullet {
    Members,
    Atoms,
    Witness,
    Amalgamation,
    Symmetry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Full,
    /// Stop at the first failing bullet.
    FirstFailure,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HyperBasisReport {
    pub size: usize,
    pub invalid_member: Option<(usize, HyperFailure)>,
    /// An atom that is `N(0, 1)` for no member.
    pub missing_atom: Option<u32>,
    /// `(member, x, y, a, b)`: `N(x, y) ≤ a ; b` has no witness.
    pub witness_gap: Option<(usize, usize, usize, u32, u32)>,
    /// `(left, right, x, y)`: no `L ≡_x left`, `L ≡_y right`.
    pub amalgamation_gap: Option<(usize, usize, usize, usize)>,
    /// `(member, σ)`: `N ∘ σ` is missing.
    pub symmetry_gap: Option<(usize, Vec<usize>)>,
}

impl HyperBasisReport {
    pub fn failed(&self) -> Vec<Bullet> {
        let mut out = Vec::new();
        if self.invalid_member.is_some() {
            out.push(Bullet::Members);
        }
        if self.missing_atom.is_some() {
            out.push(Bullet::Atoms);
        }
        if self.witness_gap.is_some() {
            out.push(Bullet::Witness);
        }
        if self.amalgamation_gap.is_some() {
            out.push(Bullet::Amalgamation);
        }
        if self.symmetry_gap.is_some() {
            out.push(Bullet::Symmetry);
        }
        out
    }

    pub fn pass(&self) -> bool {
        self.failed().is_empty()
    }
}

pub(crate) type Restriction = (Vec<u32>, Vec<(Vec<u8>, u32)>);

pub(crate) fn missing_atom(ras: &RaAtomStructure, h: &[HyperNet]) -> Option<u32> {
    let present: HashSet<u32> = h.iter().map(|n| n.atom(0, 1)).collect();
    (0..ras.atom_count() as u32).find(|a| !present.contains(a))
}

pub(crate) fn symmetry_gaps(h: &[HyperNet], first_only: bool) -> Vec<(usize, Vec<usize>)> {
    let Some(m) = h.first().map(|n| n.m) else { return Vec::new() };
    let mut by_atoms: HashMap<&[u32], Vec<&HyperNet>> = HashMap::new();
    for n in h {
        by_atoms.entry(&n.atoms).or_default().push(n);
    }
    let maps = all_maps(m);
    let mut atoms = vec![0u32; m * m];
    let mut out = Vec::new();
    for (k, n) in h.iter().enumerate() {
        let missing = maps.iter().find(|s| {
            for (e, slot) in atoms.iter_mut().enumerate() {
                *slot = n.atom(s[e / m], s[e % m]);
            }
            let Some(same) = by_atoms.get(&atoms[..]) else { return true };
            if n.hyper.is_empty() {
                !same.iter().any(|l| l.hyper.is_empty() && l.n == n.n)
            } else {
                let image = n.compose(s);
                !same.contains(&&image)
            }
        });
        if let Some(s) = missing {
            out.push((k, s.clone()));
            if first_only {
                break;
            }
        }
    }
    out
}

/// Members with a composition demand lacking a witness.
pub(crate) fn witness_gaps(ras: &RaAtomStructure, h: &[HyperNet], first_only: bool) -> Vec<(usize, usize, usize, u32, u32)> {
    let Some(m) = h.first().map(|n| n.m) else { return Vec::new() };
    let atoms = ras.atom_count() as u32;
    // (z, N off z) -> {(x, y, N(x, z), N(z, y))}
    let mut realized: HashMap<(usize, Restriction), HashSet<(usize, usize, u32, u32)>> = HashMap::new();
    for l in h {
        for z in 0..m {
            let entry = realized.entry((z, l.restriction_key(&[z]))).or_default();
            for x in (0..m).filter(|&x| x != z) {
                for y in (0..m).filter(|&y| y != z && y != x) {
                    entry.insert((x, y, l.atom(x, z), l.atom(z, y)));
                }
            }
        }
    }
    let demands: Vec<Vec<(u32, u32)>> = (0..atoms)
        .map(|c| (0..atoms).flat_map(|a| (0..atoms).map(move |b| (a, b))).filter(|&(a, b)| ras.consistent(a, b, c)).collect())
        .collect();
    let mut out = Vec::new();
    for (k, n) in h.iter().enumerate() {
        let classes: Vec<Option<&HashSet<(usize, usize, u32, u32)>>> = (0..m).map(|z| realized.get(&(z, n.restriction_key(&[z])))).collect();
        for x in 0..m {
            for y in (0..m).filter(|&y| y != x) {
                for &(a, b) in &demands[n.atom(x, y) as usize] {
                    let met = (0..m)
                        .filter(|&z| z != x && z != y)
                        .any(|z| classes[z].is_some_and(|c| c.contains(&(x, y, a, b))));
                    if !met {
                        out.push((k, x, y, a, b));
                        if first_only {
                            return out;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Pairs of members that agree off `{x, y}` but have no amalgam.
pub(crate) fn amalgamation_gaps(h: &[HyperNet], first_only: bool) -> Vec<(usize, usize, usize, usize)> {
    let Some(m) = h.first().map(|n| n.m) else { return Vec::new() };
    let mut out = Vec::new();
    for x in 0..m {
        for y in (0..m).filter(|&y| y != x) {
            // class off {x, y} -> (first member per off-x key, per off-y key, realized pairs)
            type Class = (HashMap<Restriction, usize>, HashMap<Restriction, usize>, HashSet<(Restriction, Restriction)>);
            let mut classes: HashMap<Restriction, Class> = HashMap::new();
            for (k, l) in h.iter().enumerate() {
                let c = classes.entry(l.restriction_key(&[x, y])).or_default();
                let ox = l.restriction_key(&[x]);
                let oy = l.restriction_key(&[y]);
                c.0.entry(ox.clone()).or_insert(k);
                c.1.entry(oy.clone()).or_insert(k);
                c.2.insert((ox, oy));
            }
            let mut keys: Vec<&Restriction> = classes.keys().collect();
            keys.sort();
            for key in keys {
                let (left, right, realized) = &classes[key];
                let mut ls: Vec<(&Restriction, &usize)> = left.iter().collect();
                ls.sort_by_key(|(_, &k)| k);
                let mut rs: Vec<(&Restriction, &usize)> = right.iter().collect();
                rs.sort_by_key(|(_, &k)| k);
                for (ox, &i) in &ls {
                    for (oy, &j) in &rs {
                        if !realized.contains(&((*ox).clone(), (*oy).clone())) {
                            out.push((i, j, x, y));
                            if first_only {
                                return out;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Check the hyperbasis bullets: every member is a hypernetwork, every
/// atom is some `N(0, 1)`, witnesses and amalgams exist inside the set, and
/// the set is closed under `N ↦ N ∘ σ` for every `σ : m → m`.
pub fn check_hyperbasis(ras: &RaAtomStructure, h: &[HyperNet], lambda: u32, mode: CheckMode) -> HyperBasisReport {
    let first = mode == CheckMode::FirstFailure;
    let mut report = HyperBasisReport {
        size: h.len(),
        ..Default::default()
    };
    report.invalid_member = h.iter().enumerate().find_map(|(k, n)| check_hypernet(ras, n, lambda).err().map(|e| (k, e)));
    if first && report.invalid_member.is_some() {
        return report;
    }
    report.missing_atom = missing_atom(ras, h);
    if first && report.missing_atom.is_some() {
        return report;
    }
    report.symmetry_gap = symmetry_gaps(h, true).into_iter().next();
    if first && report.symmetry_gap.is_some() {
        return report;
    }
    report.witness_gap = witness_gaps(ras, h, true).into_iter().next();
    if first && report.witness_gap.is_some() {
        return report;
    }
    report.amalgamation_gap = amalgamation_gaps(h, true).into_iter().next();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::monk::{basic_matrices, build_alpha, enumerate_matrices};

    fn lifted(g: &Graph) -> (RaAtomStructure, Vec<HyperNet>) {
        let ras = build_alpha(g, 3).unwrap();
        let h = enumerate_matrices(&ras, 3).iter().map(|m| HyperNet::lift(3, m)).collect();
        (ras, h)
    }

    #[test]
    fn identity_hypernet_passes() {
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        assert_eq!(check_hypernet(&ras, &HyperNet::lift(3, &[0; 9]), 1), Ok(()));
    }

    #[test]
    fn broken_substitution_is_named() {
        let (ras, h) = lifted(&Graph::complete(3));
        let mut bad = h.iter().find(|n| (0..3).all(|x| (0..3).all(|y| x == y || !ras.is_identity(n.atom(x, y))))).unwrap().clone();
        // a single pair whose atom clashes with the rest of its triangle
        let clash = (0..ras.atom_count() as u32).find(|&a| !ras.consistent(bad.atom(0, 2), bad.atom(2, 1), a)).unwrap();
        bad.atoms[1] = clash;
        bad.atoms[3] = ras.converse(clash);
        let f = check_hypernet(&ras, &bad, 1).unwrap_err();
        assert_eq!(f.condition, "substitution");
    }

    #[test]
    fn every_lifted_matrix_is_a_hypernet() {
        let (ras, h) = lifted(&Graph::cycle(5));
        assert!(h.iter().all(|n| check_hypernet(&ras, n, 1).is_ok()));
    }

    #[test]
    fn all_lifted_matrices_form_a_hyperbasis() {
        let (ras, h) = lifted(&Graph::complete(3));
        let r = check_hyperbasis(&ras, &h, 1, CheckMode::Full);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn empty_set_misses_atoms() {
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        assert_eq!(check_hyperbasis(&ras, &[], 1, CheckMode::Full).failed(), vec![Bullet::Atoms]);
    }

    #[test]
    fn dropping_a_matrix_breaks_a_bullet() {
        let (ras, mut h) = lifted(&Graph::complete(3));
        let k = h.iter().position(|n| n.atom(0, 1) != 0 && n.atom(0, 2) != 0).unwrap();
        h.remove(k);
        let r = check_hyperbasis(&ras, &h, 1, CheckMode::Full);
        assert!(!r.pass());
        assert!(r.symmetry_gap.is_some());
    }

    #[test]
    fn agrees_with_the_cylindric_basis_check() {
        for g in [Graph::complete(2), Graph::complete(3), Graph::cycle(4)] {
            let ras = build_alpha(&g, 3).unwrap();
            let mats = basic_matrices(&ras, 3).unwrap();
            let h: Vec<HyperNet> = (0..mats.len()).map(|k| HyperNet::lift(3, &mats.matrix(k))).collect();
            assert_eq!(check_hyperbasis(&ras, &h, 1, CheckMode::Full).pass(), crate::monk::check_cylindric_basis(&mats, &ras).pass());
        }
    }
}
