//! The map `a ↦ a* = {atoms below a}` from a finite atomic algebra into the
//! complex algebra of its atom structure.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::atomset::AtomSet;
use super::structure::{CaAtomStructure, Op};

/// A finite Boolean algebra with unary (and nullary) operators, given
/// abstractly. Its `k`-th atom corresponds to atom `k` of the frame.
pub trait FiniteBao {
    type Elem: Clone + Eq + std::hash::Hash + std::fmt::Debug;

    fn atoms(&self) -> Vec<Self::Elem>;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn complement(&self, a: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *a
    }
    fn operations(&self) -> Vec<Op>;
    /// Nullary operations ignore the argument.
    fn apply(&self, op: Op, a: &Self::Elem) -> Self::Elem;
    /// Every element, when the algebra is small enough to list.
    fn all_elements(&self) -> Option<Vec<Self::Elem>>;
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbedVerdict {
    pub embedding: bool,
    pub surjective: bool,
    pub exhaustive: bool,
    pub elements_checked: usize,
    pub witness: Option<String>,
}

/// Verify that `a ↦ a*` is a Boolean embedding preserving every operator and
/// that it is onto. Small algebras are checked element by element; large ones
/// on the atoms, the bounds and `samples` seeded random joins of atoms.
pub fn completion_embed_check<B: FiniteBao>(
    alg: &B,
    frame: &CaAtomStructure,
    samples: usize,
    seed: u64,
) -> EmbedVerdict {
    let atoms = alg.atoms();
    let universe = frame.atom_count();
    let fail = |msg: String, checked: usize, exhaustive: bool| EmbedVerdict {
        embedding: false,
        surjective: false,
        exhaustive,
        elements_checked: checked,
        witness: Some(msg),
    };
    if atoms.len() != universe {
        return fail(format!("algebra has {} atoms, frame has {universe}", atoms.len()), 0, false);
    }
    let star = |x: &B::Elem| AtomSet::from_atoms(universe, (0..universe as u32).filter(|&k| alg.leq(&atoms[k as usize], x)));

    for (k, a) in atoms.iter().enumerate() {
        if *a == alg.zero() {
            return fail(format!("atom {k} is zero"), 0, false);
        }
    }
    if star(&alg.one()).len() != universe || !star(&alg.zero()).is_empty() {
        return fail("bounds not preserved".into(), 0, false);
    }

    let listed = alg.all_elements();
    let exhaustive = listed.is_some();
    let elements: Vec<B::Elem> = match listed {
        Some(all) => all,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = atoms.clone();
            v.push(alg.zero());
            v.push(alg.one());
            for _ in 0..samples {
                let mut x = alg.zero();
                for a in &atoms {
                    if rng.gen_bool(0.5) {
                        x = alg.join(&x, a);
                    }
                }
                v.push(x);
            }
            v
        }
    };
    let stars: Vec<AtomSet> = elements.iter().map(star).collect();

    // injectivity on the checked elements
    let mut seen: HashMap<&AtomSet, usize> = HashMap::new();
    for (e, st) in stars.iter().enumerate() {
        if let Some(&other) = seen.get(st) {
            if elements[other] != elements[e] {
                return fail(format!("elements {:?} and {:?} share an image", elements[other], elements[e]), e, exhaustive);
            }
        }
        seen.insert(st, e);
    }

    let ops = alg.operations();
    for (e, x) in elements.iter().enumerate() {
        let sx = &stars[e];
        if star(&alg.complement(x)) != sx.complement() {
            return fail(format!("complement of {x:?} not preserved"), e, exhaustive);
        }
        // pair each element with a neighbour to exercise the binary operations
        let y = &elements[(e * 7 + 1) % elements.len()];
        let sy = &stars[(e * 7 + 1) % elements.len()];
        if star(&alg.join(x, y)) != sx.union(sy) || star(&alg.meet(x, y)) != sx.intersection(sy) {
            return fail(format!("join/meet of {x:?}, {y:?} not preserved"), e, exhaustive);
        }
        for &op in &ops {
            let want = match frame.cm_apply(op, if op.arity() == 0 { &[] } else { std::slice::from_ref(sx) }) {
                Ok(w) => w,
                Err(err) => return fail(err.to_string(), e, exhaustive),
            };
            let got = star(&alg.apply(op, x));
            if got != want {
                return fail(format!("{op:?} applied to {x:?}: algebra gives {got:?}, frame gives {want:?}"), e, exhaustive);
            }
        }
    }

    let surjective = if exhaustive {
        seen.len() as f64 == 2f64.powi(universe as i32)
    } else {
        // every sampled subset of atoms is hit by the join of its members
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
        (0..samples.max(1)).all(|_| {
            let mut x = alg.zero();
            let mut want = AtomSet::empty(universe);
            for (k, a) in atoms.iter().enumerate() {
                if rng.gen_bool(0.5) {
                    x = alg.join(&x, a);
                    want.insert(k as u32);
                }
            }
            star(&x) == want
        })
    };
    EmbedVerdict {
        embedding: true,
        surjective,
        exhaustive,
        elements_checked: elements.len(),
        witness: (!surjective).then(|| "image misses some set of atoms".to_string()),
    }
}

/// An algebra given by explicit operation tables over elements `0..size`.
#[derive(Clone, Debug)]
pub struct TableBao {
    pub size: usize,
    pub atoms: Vec<usize>,
    pub zero: usize,
    pub one: usize,
    pub join: Vec<usize>,
    pub meet: Vec<usize>,
    pub complement: Vec<usize>,
    pub ops: Vec<(Op, Vec<usize>)>,
}

impl TableBao {
    /// The complex algebra of a frame with at most 10 atoms, as tables. Element
    /// `e` is the set whose bit `k` is atom `k`.
    pub fn powerset_of(frame: &CaAtomStructure) -> TableBao {
        let k = frame.atom_count();
        assert!(k <= 10, "explicit tables are limited to 10 atoms");
        let size = 1usize << k;
        let to_set = |e: usize| AtomSet::from_atoms(k, (0..k as u32).filter(|b| e >> b & 1 == 1));
        let to_elem = |s: &AtomSet| s.iter().map(|b| 1usize << b).sum::<usize>();
        let mut join = vec![0; size * size];
        let mut meet = vec![0; size * size];
        for a in 0..size {
            for b in 0..size {
                join[a * size + b] = a | b;
                meet[a * size + b] = a & b;
            }
        }
        let ops = frame
            .operations()
            .into_iter()
            .map(|op| {
                let table = (0..size)
                    .map(|e| {
                        let x = to_set(e);
                        let args: &[AtomSet] = if op.arity() == 0 { &[] } else { std::slice::from_ref(&x) };
                        to_elem(&frame.cm_apply(op, args).expect("supported"))
                    })
                    .collect();
                (op, table)
            })
            .collect();
        TableBao {
            size,
            atoms: (0..k).map(|b| 1 << b).collect(),
            zero: 0,
            one: size - 1,
            join,
            meet,
            complement: (0..size).map(|e| (size - 1) & !e).collect(),
            ops,
        }
    }
}

impl FiniteBao for TableBao {
    type Elem = usize;

    fn atoms(&self) -> Vec<usize> {
        self.atoms.clone()
    }
    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        self.join[a * self.size + b]
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.meet[a * self.size + b]
    }
    fn complement(&self, a: &usize) -> usize {
        self.complement[*a]
    }
    fn operations(&self) -> Vec<Op> {
        self.ops.iter().map(|(op, _)| *op).collect()
    }
    fn apply(&self, op: Op, a: &usize) -> usize {
        let table = &self.ops.iter().find(|(o, _)| *o == op).expect("known op").1;
        table[*a]
    }
    fn all_elements(&self) -> Option<Vec<usize>> {
        Some((0..self.size).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::relation::Relation;
    use crate::bao::structure::{Kind, Replacement, Signature};

    fn small_frame() -> CaAtomStructure {
        let d = |xs: &[u32]| AtomSet::from_atoms(3, xs.iter().copied());
        CaAtomStructure::new(
            Signature { dim: 2, kind: Kind::CA },
            3,
            vec![Relation::from_keys(&[0, 0, 1]), Relation::from_keys(&[0, 1, 1])],
            Some(vec![d(&[0, 1, 2]), d(&[2]), d(&[2]), d(&[0, 1, 2])]),
            Replacement::Absent,
            None,
        )
        .unwrap()
    }

    #[test]
    fn powerset_is_isomorphic() {
        let f = small_frame();
        let v = completion_embed_check(&TableBao::powerset_of(&f), &f, 0, 0);
        assert!(v.embedding && v.surjective && v.exhaustive, "{v:?}");
    }

    #[test]
    fn corrupted_table_is_caught() {
        let f = small_frame();
        let mut alg = TableBao::powerset_of(&f);
        // c_0 of atom 0 should be {0,1}; send it to {0} instead
        alg.ops[0].1[1] = 1;
        let v = completion_embed_check(&alg, &f, 0, 0);
        assert!(!v.embedding);
        assert!(v.witness.unwrap().contains("Cyl(0)"));
    }
}
