use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::atomset::AtomSet;
use super::relation::Relation;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("an atom structure needs at least one atom")]
    NoAtoms,
    #[error("dimension {0} unsupported (expected 2..=4)")]
    Dimension(usize),
    #[error("relation slots do not match signature {0:?}: {1}")]
    Slots(Kind, String),
    #[error("operation {0:?} is not in signature {1:?}")]
    UnknownOp(Op, Kind),
    #[error("operation {0:?} expects {1} argument(s), got {2}")]
    Arity(Op, usize, usize),
    #[error("{to:?} is not a reduct of {from:?}")]
    NotReduct { from: Kind, to: Kind },
    #[error("malformed structure: {0}")]
    Malformed(String),
}

/// Similarity types, ordered by inclusion of their operation inventories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Df,
    Sc,
    CA,
    PA,
    PEA,
}

impl Kind {
    pub fn has_diagonals(self) -> bool {
        matches!(self, Kind::CA | Kind::PEA)
    }

    pub fn has_replacements(self) -> bool {
        matches!(self, Kind::Sc | Kind::PA | Kind::PEA)
    }

    pub fn has_transpositions(self) -> bool {
        matches!(self, Kind::PA | Kind::PEA)
    }

    /// Whether every operation of `other` is available in `self`, counting
    /// replacements as available wherever diagonals are.
    pub fn covers(self, other: Kind) -> bool {
        let repl = self.has_replacements() || self.has_diagonals();
        (!other.has_diagonals() || self.has_diagonals())
            && (!other.has_replacements() || repl)
            && (!other.has_transpositions() || self.has_transpositions())
    }

    pub fn parse(name: &str) -> Option<Kind> {
        match name.to_ascii_lowercase().as_str() {
            "df" => Some(Kind::Df),
            "sc" => Some(Kind::Sc),
            "ca" => Some(Kind::CA),
            "pa" => Some(Kind::PA),
            "pea" | "qea" => Some(Kind::PEA),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub dim: usize,
    pub kind: Kind,
}

/// Non-Boolean operations of a complex algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    /// `c_i`
    Cyl(usize),
    /// `d_ij`, nullary
    Diag(usize, usize),
    /// `s^i_j`, replacement of `i` by `j`
    Repl(usize, usize),
    /// `s_ij`, transposition of `i` and `j`
    Transp(usize, usize),
}

impl Op {
    pub fn arity(self) -> usize {
        match self {
            Op::Diag(..) => 0,
            _ => 1,
        }
    }
}

/// How `s^i_j` is obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Replacement {
    Absent,
    /// One relation per ordered pair, indexed `i * n + j`; the diagonal entries are unused.
    Stored(Vec<Option<Relation>>),
    /// `s^i_j X = c_i(X ∩ d_ij)`.
    Derived,
}

/// A finite atom structure for any of the supported signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaAtomStructure {
    signature: Signature,
    atom_count: usize,
    cyl: Vec<Relation>,
    diag: Option<Vec<AtomSet>>,
    repl: Replacement,
    transp: Option<Vec<Relation>>,
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // position of (i, j) in the row-major listing of pairs i < j
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl CaAtomStructure {
    pub fn new(
        signature: Signature,
        atom_count: usize,
        cyl: Vec<Relation>,
        diag: Option<Vec<AtomSet>>,
        repl: Replacement,
        transp: Option<Vec<Relation>>,
    ) -> Result<Self, StructureError> {
        let n = signature.dim;
        let kind = signature.kind;
        if atom_count == 0 {
            return Err(StructureError::NoAtoms);
        }
        if !(2..=4).contains(&n) {
            return Err(StructureError::Dimension(n));
        }
        let bad = |m: &str| Err(StructureError::Slots(kind, m.to_string()));
        if cyl.len() != n || cyl.iter().any(|r| r.atom_count() != atom_count) {
            return bad("need one cylindrification relation per dimension");
        }
        match (&diag, kind.has_diagonals()) {
            (Some(d), true) => {
                if d.len() != n * n || d.iter().any(|s| s.universe() != atom_count) {
                    return bad("need n*n diagonal sets");
                }
            }
            (None, false) => {}
            _ => return bad("diagonal slots"),
        }
        match (&repl, kind.has_replacements()) {
            (Replacement::Absent, false) => {}
            (Replacement::Derived, true) if kind.has_diagonals() => {}
            (Replacement::Stored(v), true) => {
                if v.len() != n * n {
                    return bad("need n*n replacement slots");
                }
                for i in 0..n {
                    for j in 0..n {
                        let slot = &v[i * n + j];
                        if (i != j) != slot.is_some() {
                            return bad("replacement slots must be filled exactly off the diagonal");
                        }
                        if slot.as_ref().is_some_and(|r| r.atom_count() != atom_count) {
                            return bad("replacement relation size");
                        }
                    }
                }
            }
            _ => return bad("replacement slots"),
        }
        match (&transp, kind.has_transpositions()) {
            (Some(t), true) => {
                if t.len() != n * (n - 1) / 2 || t.iter().any(|r| r.atom_count() != atom_count) {
                    return bad("need one transposition relation per pair i<j");
                }
            }
            (None, false) => {}
            _ => return bad("transposition slots"),
        }
        Ok(CaAtomStructure {
            signature,
            atom_count,
            cyl,
            diag,
            repl,
            transp,
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.signature.dim
    }

    pub fn kind(&self) -> Kind {
        self.signature.kind
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn cyl(&self, i: usize) -> &Relation {
        &self.cyl[i]
    }

    pub fn diagonal(&self, i: usize, j: usize) -> Option<&AtomSet> {
        self.diag.as_ref().map(|d| &d[i * self.dim() + j])
    }

    pub fn replacement(&self) -> &Replacement {
        &self.repl
    }

    pub fn transposition(&self, i: usize, j: usize) -> Option<&Relation> {
        if i == j {
            return None;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.transp.as_ref().map(|t| &t[pair_index(self.dim(), a, b)])
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet::empty(self.atom_count)
    }

    pub fn full_set(&self) -> AtomSet {
        AtomSet::full(self.atom_count)
    }

    /// Every `R_ci` reflexive and symmetric.
    pub fn is_frame_normal(&self) -> bool {
        self.cyl.iter().all(|r| r.is_reflexive() && r.is_symmetric())
    }

    pub fn supports(&self, op: Op) -> bool {
        let n = self.dim();
        let kind = self.kind();
        match op {
            Op::Cyl(i) => i < n,
            Op::Diag(i, j) => i < n && j < n && kind.has_diagonals(),
            Op::Repl(i, j) => i < n && j < n && kind.has_replacements(),
            Op::Transp(i, j) => i < n && j < n && kind.has_transpositions(),
        }
    }

    /// Every operation in the signature, in a fixed order.
    pub fn operations(&self) -> Vec<Op> {
        let n = self.dim();
        let mut ops: Vec<Op> = (0..n).map(Op::Cyl).collect();
        if self.kind().has_diagonals() {
            for i in 0..n {
                for j in 0..n {
                    ops.push(Op::Diag(i, j));
                }
            }
        }
        if self.kind().has_replacements() {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        ops.push(Op::Repl(i, j));
                    }
                }
            }
        }
        if self.kind().has_transpositions() {
            for i in 0..n {
                for j in i + 1..n {
                    ops.push(Op::Transp(i, j));
                }
            }
        }
        ops
    }

    /// Evaluate a signature operation in the complex algebra.
    pub fn cm_apply(&self, op: Op, args: &[AtomSet]) -> Result<AtomSet, StructureError> {
        if !self.supports(op) {
            return Err(StructureError::UnknownOp(op, self.kind()));
        }
        if args.len() != op.arity() {
            return Err(StructureError::Arity(op, op.arity(), args.len()));
        }
        Ok(match op {
            Op::Diag(i, j) => self.diag_set(i, j),
            _ => self.apply_unary(op, &args[0]),
        })
    }

    /// Unchecked evaluation of a unary operation; callers guarantee support.
    pub fn apply_unary(&self, op: Op, x: &AtomSet) -> AtomSet {
        match op {
            Op::Cyl(i) => self.cyl[i].image(x),
            Op::Repl(i, j) => {
                if i == j {
                    return x.clone();
                }
                match &self.repl {
                    Replacement::Stored(v) => v[i * self.dim() + j].as_ref().expect("slot").image(x),
                    Replacement::Derived => {
                        let d = self.diag_set(i, j);
                        self.cyl[i].image(&x.intersection(&d))
                    }
                    Replacement::Absent => panic!("replacement requested from {:?}", self.kind()),
                }
            }
            Op::Transp(i, j) => match self.transposition(i, j) {
                None => x.clone(),
                Some(r) => r.image(x),
            },
            Op::Diag(i, j) => self.diag_set(i, j),
        }
    }

    fn diag_set(&self, i: usize, j: usize) -> AtomSet {
        if i == j {
            return self.full_set();
        }
        self.diagonal(i, j).expect("diagonal slot").clone()
    }

    /// The relation behind `s^i_j` as explicit pairs (materialized when derived).
    fn replacement_relation(&self, i: usize, j: usize) -> Relation {
        match &self.repl {
            Replacement::Stored(v) => v[i * self.dim() + j].clone().expect("slot"),
            _ => {
                // s^i_j X = c_i(X ∩ d_ij): a is related to b iff b ∈ d_ij and a ≡_i b.
                let d = self.diag_set(i, j);
                let mut pairs = Vec::new();
                for b in d.iter() {
                    let single = AtomSet::singleton(self.atom_count, b);
                    for a in self.cyl[i].image(&single).iter() {
                        pairs.push((a, b));
                    }
                }
                Relation::from_pairs(self.atom_count, &pairs)
            }
        }
    }

    /// Drop relation slots down to the target signature.
    pub fn reduct(&self, target: Kind) -> Result<CaAtomStructure, StructureError> {
        let kind = self.kind();
        if !kind.covers(target) {
            return Err(StructureError::NotReduct { from: kind, to: target });
        }
        if target == kind {
            return Ok(self.clone());
        }
        let n = self.dim();
        let diag = if target.has_diagonals() { self.diag.clone() } else { None };
        let repl = if !target.has_replacements() {
            Replacement::Absent
        } else if target.has_diagonals() {
            self.repl.clone()
        } else {
            match &self.repl {
                Replacement::Stored(v) => Replacement::Stored(v.clone()),
                _ => {
                    let mut v = vec![None; n * n];
                    for i in 0..n {
                        for j in 0..n {
                            if i != j {
                                v[i * n + j] = Some(self.replacement_relation(i, j));
                            }
                        }
                    }
                    Replacement::Stored(v)
                }
            }
        };
        let transp = if target.has_transpositions() { self.transp.clone() } else { None };
        CaAtomStructure::new(
            Signature { dim: n, kind: target },
            self.atom_count,
            self.cyl.clone(),
            diag,
            repl,
            transp,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_atom(kind: Kind) -> CaAtomStructure {
        let n = 3;
        let rel = || Relation::from_keys(&[0u8]);
        let diag = kind.has_diagonals().then(|| vec![AtomSet::full(1); n * n]);
        let repl = if !kind.has_replacements() {
            Replacement::Absent
        } else if kind.has_diagonals() {
            Replacement::Derived
        } else {
            let mut v = vec![None; n * n];
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        v[i * n + j] = Some(rel());
                    }
                }
            }
            Replacement::Stored(v)
        };
        let transp = kind.has_transpositions().then(|| vec![Relation::from_function(vec![0]); 3]);
        CaAtomStructure::new(Signature { dim: n, kind }, 1, (0..n).map(|_| rel()).collect(), diag, repl, transp)
            .unwrap()
    }

    #[test]
    fn pair_index_is_dense() {
        for n in 2..=4 {
            let mut seen = vec![];
            for i in 0..n {
                for j in i + 1..n {
                    seen.push(pair_index(n, i, j));
                }
            }
            assert_eq!(seen, (0..n * (n - 1) / 2).collect::<Vec<_>>());
        }
    }

    #[test]
    fn zero_atoms_rejected() {
        let err = CaAtomStructure::new(
            Signature { dim: 2, kind: Kind::Df },
            0,
            vec![Relation::from_keys::<u8>(&[]), Relation::from_keys::<u8>(&[])],
            None,
            Replacement::Absent,
            None,
        );
        assert_eq!(err.unwrap_err(), StructureError::NoAtoms);
    }

    #[test]
    fn cylindrifier_edge_cases() {
        let s = one_atom(Kind::PEA);
        assert!(s.cm_apply(Op::Cyl(0), &[s.empty_set()]).unwrap().is_empty());
        assert!(s.cm_apply(Op::Cyl(2), &[s.full_set()]).unwrap().is_full());
        assert!(s.is_frame_normal());
    }

    #[test]
    fn reduct_rules() {
        let s = one_atom(Kind::PEA);
        let df = s.reduct(Kind::Df).unwrap();
        assert_eq!(df.kind(), Kind::Df);
        assert!(df.diagonal(0, 1).is_none());
        assert!(df.transposition(0, 1).is_none());
        assert_eq!(s.reduct(Kind::PEA).unwrap(), s);
        assert_eq!(s.reduct(Kind::CA).unwrap().reduct(Kind::Df).unwrap(), df);
        let sc = s.reduct(Kind::Sc).unwrap();
        assert!(matches!(sc.replacement(), Replacement::Stored(_)));
        assert!(df.reduct(Kind::CA).is_err());
        assert!(matches!(
            s.cm_apply(Op::Diag(0, 1), &[]).and_then(|_| df.cm_apply(Op::Diag(0, 1), &[])),
            Err(StructureError::UnknownOp(..))
        ));
    }
}
