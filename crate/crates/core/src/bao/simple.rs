use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::atomset::AtomSet;
use super::axioms::random_set;
use super::structure::{CaAtomStructure, Op};

#[derive(Clone, Debug, Serialize)]
pub struct SimpleVerdict {
    pub simple: bool,
    pub atoms_checked: usize,
    pub random_checked: usize,
    /// A nonzero element whose discriminator image is not the unit.
    pub counterexample: Option<AtomSet>,
}

/// `c_0 c_1 ... c_{n-1} x`.
pub fn discriminator(s: &CaAtomStructure, x: &AtomSet) -> AtomSet {
    let mut y = x.clone();
    for i in (0..s.dim()).rev() {
        y = s.apply_unary(Op::Cyl(i), &y);
    }
    y
}

/// Simplicity via the discriminator term, over every atom and then over
/// `random_trials` seeded random nonzero sets.
pub fn is_simple(s: &CaAtomStructure, random_trials: usize, seed: u64) -> SimpleVerdict {
    let n = s.atom_count();
    let bad_atom = (0..n as u32).into_par_iter().find_map_first(|a| {
        let image = discriminator(s, &AtomSet::singleton(n, a));
        (!image.is_full()).then_some(image)
    });
    if let Some(component) = bad_atom {
        // the image of an atom is closed under the term, so it witnesses failure itself
        let witness = if discriminator(s, &component).is_full() {
            AtomSet::singleton(n, component.first().expect("nonempty"))
        } else {
            component
        };
        return SimpleVerdict {
            simple: false,
            atoms_checked: n,
            random_checked: 0,
            counterexample: Some(witness),
        };
    }
    let bad_random = (0..random_trials).into_par_iter().find_map_first(|t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (t as u64).wrapping_mul(0x2545_F491_4F6C_DD1D));
        let x = random_set(&mut rng, n);
        (!x.is_empty() && !discriminator(s, &x).is_full()).then_some(x)
    });
    SimpleVerdict {
        simple: bad_random.is_none(),
        atoms_checked: n,
        random_checked: random_trials,
        counterexample: bad_random,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::relation::Relation;
    use crate::bao::structure::{Kind, Replacement, Signature};

    fn frame(keys0: &[u8], keys1: &[u8]) -> CaAtomStructure {
        CaAtomStructure::new(
            Signature { dim: 2, kind: Kind::Df },
            keys0.len(),
            vec![Relation::from_keys(keys0), Relation::from_keys(keys1)],
            None,
            Replacement::Absent,
            None,
        )
        .unwrap()
    }

    #[test]
    fn one_atom_is_simple() {
        assert!(is_simple(&frame(&[0], &[0]), 10, 1).simple);
    }

    #[test]
    fn grid_is_simple() {
        // atoms are cells of a 2x2 grid; c_0 keeps the column, c_1 keeps the row
        assert!(is_simple(&frame(&[0, 1, 0, 1], &[0, 0, 1, 1]), 50, 2).simple);
    }

    #[test]
    fn disjoint_union_is_not_simple() {
        // two 2x1 components: {0,1} and {2,3}
        let v = is_simple(&frame(&[0, 0, 1, 1], &[0, 1, 2, 3]), 50, 3);
        assert!(!v.simple);
        let x = v.counterexample.unwrap();
        assert_eq!(x.to_vec(), vec![0, 1]);
    }
}
