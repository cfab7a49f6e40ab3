//! Representing an algebra with substitutions indexed by `S_n` in the
//! powerset of `S_n`, via `f(x) = {τ : s_τ x ∈ F}` for a principal ultrafilter `F`.

use serde::Serialize;
use thiserror::Error;

use super::atomset::AtomSet;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `(σ ∘ τ)(x) = σ(τ(x))`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Vec<usize> {
    tau.iter().map(|&x| sigma[x]).collect()
}

/// A finite Boolean algebra (the powerset of `atoms` points) with one
/// endomorphism per permutation, given by the image of each atom.
#[derive(Clone, Debug)]
pub struct SubstitutionAlgebra {
    pub n: usize,
    pub atoms: usize,
    /// `images[p][a]` is `s_τ({a})` for the `p`-th permutation in [`permutations`] order.
    pub images: Vec<Vec<AtomSet>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("s_{0:?} is not a Boolean endomorphism")]
    NotEndomorphism(Vec<usize>),
    #[error("s_id is not the identity")]
    Identity,
    #[error("s_{{σ∘τ}} differs from s_σ s_τ for σ={0:?}, τ={1:?}")]
    Composition(Vec<usize>, Vec<usize>),
    #[error("the chosen element is zero")]
    Zero,
    #[error("expected {0} maps")]
    Shape(usize),
}

impl SubstitutionAlgebra {
    pub fn apply(&self, p: usize, x: &AtomSet) -> AtomSet {
        let mut out = AtomSet::empty(self.atoms);
        for a in x {
            out.union_with(&self.images[p][a as usize]);
        }
        out
    }

    pub fn validate(&self) -> Result<(), SubstitutionError> {
        let perms = permutations(self.n);
        if self.images.len() != perms.len() || self.images.iter().any(|v| v.len() != self.atoms) {
            return Err(SubstitutionError::Shape(perms.len()));
        }
        for (p, tau) in perms.iter().enumerate() {
            // images of atoms must partition the unit
            let mut cover = AtomSet::empty(self.atoms);
            for img in &self.images[p] {
                if cover.intersects(img) {
                    return Err(SubstitutionError::NotEndomorphism(tau.clone()));
                }
                cover.union_with(img);
            }
            if !cover.is_full() {
                return Err(SubstitutionError::NotEndomorphism(tau.clone()));
            }
        }
        for a in 0..self.atoms {
            if self.images[0][a] != AtomSet::singleton(self.atoms, a as u32) {
                return Err(SubstitutionError::Identity);
            }
        }
        let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation");
        for (ps, sigma) in perms.iter().enumerate() {
            for (pt, tau) in perms.iter().enumerate() {
                let pc = index_of(&compose(sigma, tau));
                for a in 0..self.atoms as u32 {
                    let x = AtomSet::singleton(self.atoms, a);
                    if self.apply(pc, &x) != self.apply(ps, &self.apply(pt, &x)) {
                        return Err(SubstitutionError::Composition(sigma.clone(), tau.clone()));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupRepresentation {
    pub permutations: Vec<Vec<usize>>,
    /// `f({a})` for every atom, as a set of permutation indices.
    pub atom_images: Vec<AtomSet>,
    pub image: AtomSet,
    pub homomorphism: bool,
}

impl GroupRepresentation {
    pub fn map(&self, x: &AtomSet) -> AtomSet {
        let mut out = AtomSet::empty(self.permutations.len());
        for a in x {
            out.union_with(&self.atom_images[a as usize]);
        }
        out
    }
}

/// `f(x) = {τ : b ∈ s_τ x}` where `b` is the least atom below `a`.
pub fn symmetric_group_repr(alg: &SubstitutionAlgebra, a: &AtomSet) -> Result<GroupRepresentation, SubstitutionError> {
    alg.validate()?;
    let b = a.first().ok_or(SubstitutionError::Zero)?;
    let perms = permutations(alg.n);
    let atom_images: Vec<AtomSet> = (0..alg.atoms as u32)
        .map(|x| {
            let single = AtomSet::singleton(alg.atoms, x);
            AtomSet::from_atoms(perms.len(), (0..perms.len() as u32).filter(|&p| alg.apply(p as usize, &single).contains(b)))
        })
        .collect();
    // a homomorphism of finite Boolean algebras sends the atoms to a partition of the unit
    let mut cover = AtomSet::empty(perms.len());
    let mut disjoint = true;
    for img in &atom_images {
        disjoint &= !cover.intersects(img);
        cover.union_with(img);
    }
    let rep = GroupRepresentation {
        permutations: perms,
        atom_images,
        image: AtomSet::empty(0),
        homomorphism: disjoint && cover.is_full(),
    };
    let image = rep.map(a);
    Ok(GroupRepresentation { image, ..rep })
}

/// The powerset of `S_n` with `s_τ(X) = {g : g∘τ ∈ X}`.
pub fn right_translation_algebra(n: usize) -> SubstitutionAlgebra {
    let perms = permutations(n);
    let index_of = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation") as u32;
    let images = perms
        .iter()
        .map(|tau| {
            (0..perms.len())
                .map(|h| {
                    // s_τ({h}) = {g : g∘τ = h}
                    let members = perms.iter().filter(|g| index_of(&compose(g, tau)) == h as u32).map(index_of);
                    AtomSet::from_atoms(perms.len(), members)
                })
                .collect()
        })
        .collect();
    SubstitutionAlgebra {
        n,
        atoms: perms.len(),
        images,
    }
}
