use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bao::AtomSet;
use crate::graphs::Graph;

/// How the consistent triples of an atom structure are decided.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Consistency {
    /// The Monk rule over a graph with `colours` colours; atom 0 is the
    /// identity and atom `1 + node * colours + colour` is `(node, colour)`.
    Monk { graph: Graph, colours: usize },
    /// Explicit bitmap indexed `(a * N + b) * N + c`.
    Table(Vec<u64>),
}

/// A relation-algebra atom structure. `consistent(a, b, c)` holds iff
/// `c ≤ a ; b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaAtomStructure {
    atom_count: usize,
    identity: Vec<u32>,
    converse: Vec<u32>,
    rule: Consistency,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RaError {
    #[error("converse map has {0} entries for {1} atoms")]
    ConverseShape(usize, usize),
    #[error("atom id {0} out of range")]
    OutOfRange(u32),
    #[error("run-length bitmap covers {0} triples, expected {1}")]
    BitmapLength(u64, u64),
    #[error("need at least {0} colours and one node")]
    TooSmall(usize),
}

pub const IDENTITY: u32 = 0;

/// The Monk-style atom structure: `1'` together with `(node, colour)` for
/// every node of `g` and colour below `colours`, all self-converse.
pub fn build_alpha(g: &Graph, colours: usize) -> Result<RaAtomStructure, RaError> {
    if colours < 3 || g.node_count() == 0 {
        return Err(RaError::TooSmall(3));
    }
    let atom_count = 1 + g.node_count() * colours;
    Ok(RaAtomStructure {
        atom_count,
        identity: vec![IDENTITY],
        converse: (0..atom_count as u32).collect(),
        rule: Consistency::Monk {
            graph: g.clone(),
            colours,
        },
    })
}

impl RaAtomStructure {
    /// A structure with an explicit consistency predicate.
    pub fn from_predicate(
        atom_count: usize,
        identity: Vec<u32>,
        converse: Vec<u32>,
        consistent: impl Fn(u32, u32, u32) -> bool,
    ) -> Result<RaAtomStructure, RaError> {
        if converse.len() != atom_count {
            return Err(RaError::ConverseShape(converse.len(), atom_count));
        }
        if let Some(&bad) = identity.iter().chain(&converse).find(|&&a| a as usize >= atom_count) {
            return Err(RaError::OutOfRange(bad));
        }
        let total = atom_count.pow(3);
        let mut bits = vec![0u64; total.div_ceil(64)];
        let n = atom_count as u32;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if consistent(a, b, c) {
                        let k = ((a * n + b) * n + c) as usize;
                        bits[k / 64] |= 1 << (k % 64);
                    }
                }
            }
        }
        Ok(RaAtomStructure {
            atom_count,
            identity,
            converse,
            rule: Consistency::Table(bits),
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn identity_atoms(&self) -> &[u32] {
        &self.identity
    }

    pub fn is_identity(&self, a: u32) -> bool {
        self.identity.contains(&a)
    }

    pub fn converse(&self, a: u32) -> u32 {
        self.converse[a as usize]
    }

    /// The graph and colour count for structures built by [`build_alpha`].
    pub fn monk_parameters(&self) -> Option<(&Graph, usize)> {
        match &self.rule {
            Consistency::Monk { graph, colours } => Some((graph, *colours)),
            Consistency::Table(_) => None,
        }
    }

    /// `(node, colour)` of a coloured atom of a Monk structure.
    pub fn colour_of(&self, a: u32) -> Option<(u32, usize)> {
        let (_, colours) = self.monk_parameters()?;
        (a != IDENTITY).then(|| ((a - 1) / colours as u32, (a - 1) as usize % colours))
    }

    pub fn atom_of(&self, node: u32, colour: usize) -> u32 {
        let (_, colours) = self.monk_parameters().expect("coloured structure");
        1 + node * colours as u32 + colour as u32
    }

    pub fn consistent(&self, a: u32, b: u32, c: u32) -> bool {
        match &self.rule {
            Consistency::Table(bits) => {
                let n = self.atom_count as u32;
                let k = ((a * n + b) * n + c) as usize;
                bits[k / 64] >> (k % 64) & 1 == 1
            }
            Consistency::Monk { graph, colours } => {
                let ids = [a, b, c];
                let ones = ids.iter().filter(|&&x| x == IDENTITY).count();
                if ones > 0 {
                    // exactly one identity and the other two equal, or all three identity
                    let rest: Vec<u32> = ids.iter().copied().filter(|&x| x != IDENTITY).collect();
                    return match rest.as_slice() {
                        [] => true,
                        [x, y] => x == y,
                        _ => false,
                    };
                }
                let k = *colours as u32;
                let colour = |x: u32| (x - 1) % k;
                let node = |x: u32| (x - 1) / k;
                if colour(a) != colour(b) || colour(b) != colour(c) {
                    return true;
                }
                graph.edge_within(&[node(a), node(b), node(c)]).is_some()
            }
        }
    }

    /// `a ; b` as a set of atoms.
    pub fn compose_atoms(&self, a: u32, b: u32) -> AtomSet {
        AtomSet::from_atoms(self.atom_count, (0..self.atom_count as u32).filter(|&c| self.consistent(a, b, c)))
    }

    /// `X ; Y` in the complex algebra.
    pub fn compose(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        let mut out = AtomSet::empty(self.atom_count);
        for a in x {
            for b in y {
                out.union_with(&self.compose_atoms(a, b));
            }
        }
        out
    }

    pub fn to_json_value(&self) -> RaJson {
        let n = self.atom_count as u32;
        let mut runs = Vec::new();
        let mut current = false;
        let mut len = 0u64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let bit = self.consistent(a, b, c);
                    if bit != current {
                        runs.push(len);
                        current = bit;
                        len = 0;
                    }
                    len += 1;
                }
            }
        }
        runs.push(len);
        RaJson {
            atoms: self.atom_count,
            identity: self.identity.clone(),
            converse: self.converse.clone(),
            consistent: runs,
        }
    }

    pub fn from_json_value(j: &RaJson) -> Result<RaAtomStructure, RaError> {
        let total = (j.atoms as u64).pow(3);
        let covered: u64 = j.consistent.iter().sum();
        if covered != total {
            return Err(RaError::BitmapLength(covered, total));
        }
        let mut bits = vec![false; total as usize];
        let mut pos = 0usize;
        for (k, &len) in j.consistent.iter().enumerate() {
            if k % 2 == 1 {
                bits[pos..pos + len as usize].fill(true);
            }
            pos += len as usize;
        }
        let n = j.atoms as u32;
        RaAtomStructure::from_predicate(j.atoms, j.identity.clone(), j.converse.clone(), |a, b, c| {
            bits[((a * n + b) * n + c) as usize]
        })
    }
}

/// Wire format. `consistent` is a run-length encoding of the triple bitmap
/// in `(a, b, c)` lexicographic order, starting with a run of inconsistent
/// triples (possibly empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaJson {
    pub atoms: usize,
    pub identity: Vec<u32>,
    pub converse: Vec<u32>,
    pub consistent: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaReport {
    pub identity_law: Option<[u32; 3]>,
    pub converse_involution: Option<u32>,
    pub peircean: Option<[u32; 3]>,
    pub associativity: Option<[u32; 3]>,
}

impl RaReport {
    pub fn pass(&self) -> bool {
        self.identity_law.is_none() && self.converse_involution.is_none() && self.peircean.is_none() && self.associativity.is_none()
    }
}

/// Check the atom-structure laws, returning a witness for each failure:
/// identity atoms compose as equality, converse is an involution fixing the
/// identity, consistent triples are closed under the Peircean transforms,
/// and composition in the complex algebra is associative on atoms.
pub fn check_ra_atomstructure(ras: &RaAtomStructure) -> RaReport {
    let n = ras.atom_count as u32;
    let mut report = RaReport {
        identity_law: None,
        converse_involution: None,
        peircean: None,
        associativity: None,
    };
    report.converse_involution = (0..n).find(|&a| {
        ras.converse(ras.converse(a)) != a || (ras.is_identity(a) && ras.converse(a) != a)
    });
    'identity: for &e in &ras.identity {
        for x in 0..n {
            for y in 0..n {
                if x != y && ras.consistent(e, x, y) {
                    report.identity_law = Some([e, x, y]);
                    break 'identity;
                }
            }
        }
    }
    if report.identity_law.is_none() {
        report.identity_law = (0..n)
            .find(|&x| !ras.identity.iter().any(|&e| ras.consistent(e, x, x)))
            .map(|x| [IDENTITY, x, x]);
    }
    'peirce: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if ras.consistent(a, b, c)
                    && !(ras.consistent(ras.converse(a), c, b) && ras.consistent(c, ras.converse(b), a))
                {
                    report.peircean = Some([a, b, c]);
                    break 'peirce;
                }
            }
        }
    }
    let comp: Vec<Vec<AtomSet>> = (0..n).map(|a| (0..n).map(|b| ras.compose_atoms(a, b)).collect()).collect();
    let compose_set_atom = |x: &AtomSet, c: u32| {
        let mut out = AtomSet::empty(n as usize);
        for d in x {
            out.union_with(&comp[d as usize][c as usize]);
        }
        out
    };
    let compose_atom_set = |a: u32, x: &AtomSet| {
        let mut out = AtomSet::empty(n as usize);
        for d in x {
            out.union_with(&comp[a as usize][d as usize]);
        }
        out
    };
    'assoc: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let left = compose_set_atom(&comp[a as usize][b as usize], c);
                let right = compose_atom_set(a, &comp[b as usize][c as usize]);
                if left != right {
                    report.associativity = Some([a, b, c]);
                    break 'assoc;
                }
            }
        }
    }
    report
}
