//! JSON form of atom structures.
//!
//! Relations are written compactly: equivalences as `{"classes": [...]}`,
//! total maps as `{"function": [...]}`, anything else as `{"pairs": [...]}`.
//! A bare array of pairs is also accepted on input.

use serde::{Deserialize, Serialize};

use super::atomset::AtomSet;
use super::relation::Relation;
use super::structure::{CaAtomStructure, Kind, Replacement, Signature, StructureError};

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum TaggedRelation {
    Classes(Vec<Vec<u32>>),
    Function(Vec<u32>),
    Pairs(Vec<(u32, u32)>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RelationJson {
    Bare(Vec<(u32, u32)>),
    Tagged(TaggedRelation),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ReplJson {
    Derived(String),
    Stored(Vec<Option<RelationJson>>),
}

#[derive(Serialize, Deserialize)]
pub struct StructureJson {
    kind: Kind,
    n: usize,
    atoms: usize,
    ci: Vec<RelationJson>,
    dij: Option<Vec<Vec<u32>>>,
    s_repl: Option<ReplJson>,
    s_transp: Option<Vec<RelationJson>>,
}

fn relation_to_json(r: &Relation) -> RelationJson {
    RelationJson::Tagged(match r {
        Relation::Equivalence { classes, .. } => TaggedRelation::Classes(classes.clone()),
        Relation::Function { map } => TaggedRelation::Function(map.clone()),
        Relation::General { .. } => TaggedRelation::Pairs(r.pairs()),
    })
}

fn relation_from_json(atoms: usize, r: RelationJson) -> Result<Relation, StructureError> {
    let check = |a: u32| -> Result<(), StructureError> {
        if a as usize >= atoms {
            Err(StructureError::Malformed(format!("atom {a} out of range")))
        } else {
            Ok(())
        }
    };
    match r {
        RelationJson::Bare(pairs) | RelationJson::Tagged(TaggedRelation::Pairs(pairs)) => {
            for &(a, b) in &pairs {
                check(a)?;
                check(b)?;
            }
            Ok(Relation::from_pairs(atoms, &pairs))
        }
        RelationJson::Tagged(TaggedRelation::Function(map)) => {
            if map.len() != atoms {
                return Err(StructureError::Malformed("function length".into()));
            }
            for &b in &map {
                check(b)?;
            }
            Ok(Relation::from_function(map))
        }
        RelationJson::Tagged(TaggedRelation::Classes(classes)) => {
            let mut key = vec![u32::MAX; atoms];
            for (c, members) in classes.iter().enumerate() {
                for &a in members {
                    check(a)?;
                    if key[a as usize] != u32::MAX {
                        return Err(StructureError::Malformed(format!("atom {a} in two classes")));
                    }
                    key[a as usize] = c as u32;
                }
            }
            if key.contains(&u32::MAX) {
                return Err(StructureError::Malformed("classes do not cover all atoms".into()));
            }
            Ok(Relation::from_keys(&key))
        }
    }
}

impl CaAtomStructure {
    pub fn to_json_value(&self) -> StructureJson {
        let n = self.dim();
        let dij = self.kind().has_diagonals().then(|| {
            let mut v = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    v.push(self.diagonal(i, j).expect("diagonal").to_vec());
                }
            }
            v
        });
        let s_repl = match self.replacement() {
            Replacement::Absent => None,
            Replacement::Derived => Some(ReplJson::Derived("derived".into())),
            Replacement::Stored(v) => Some(ReplJson::Stored(
                v.iter().map(|r| r.as_ref().map(relation_to_json)).collect(),
            )),
        };
        let s_transp = self.kind().has_transpositions().then(|| {
            let mut v = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    v.push(relation_to_json(self.transposition(i, j).expect("transposition")));
                }
            }
            v
        });
        StructureJson {
            kind: self.kind(),
            n,
            atoms: self.atom_count(),
            ci: (0..n).map(|i| relation_to_json(self.cyl(i))).collect(),
            dij,
            s_repl,
            s_transp,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(j: StructureJson) -> Result<CaAtomStructure, StructureError> {
        let atoms = j.atoms;
        let ci = j
            .ci
            .into_iter()
            .map(|r| relation_from_json(atoms, r))
            .collect::<Result<Vec<_>, _>>()?;
        let diag = match j.dij {
            None => None,
            Some(sets) => {
                let mut out = Vec::with_capacity(sets.len());
                for s in sets {
                    if s.iter().any(|&a| a as usize >= atoms) {
                        return Err(StructureError::Malformed("diagonal atom out of range".into()));
                    }
                    out.push(AtomSet::from_atoms(atoms, s));
                }
                Some(out)
            }
        };
        let repl = match j.s_repl {
            None => Replacement::Absent,
            Some(ReplJson::Derived(tag)) if tag == "derived" => Replacement::Derived,
            Some(ReplJson::Derived(tag)) => {
                return Err(StructureError::Malformed(format!("unknown s_repl tag {tag:?}")))
            }
            Some(ReplJson::Stored(v)) => Replacement::Stored(
                v.into_iter()
                    .map(|r| r.map(|r| relation_from_json(atoms, r)).transpose())
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let transp = match j.s_transp {
            None => None,
            Some(v) => Some(
                v.into_iter()
                    .map(|r| relation_from_json(atoms, r))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        CaAtomStructure::new(Signature { dim: j.n, kind: j.kind }, atoms, ci, diag, repl, transp)
    }

    pub fn from_json(text: &str) -> Result<CaAtomStructure, StructureError> {
        let j: StructureJson =
            serde_json::from_str(text).map_err(|e| StructureError::Malformed(e.to_string()))?;
        Self::from_json_value(j)
    }
}
