use serde::Serialize;

use super::check::{amalgamation_gaps, check_hyperbasis, missing_atom, symmetry_gaps, witness_gaps, CheckMode};
use super::HyperNet;
use crate::monk::{check_ra_atomstructure, enumerate_matrices, RaAtomStructure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    Found { basis: Vec<HyperNet>, evaluations: u64 },
    NoneWithinBounds { candidates: usize, evaluations: u64 },
    BudgetExhausted { evaluations: u64 },
}

struct Search<'a> {
    ras: &'a RaAtomStructure,
    candidates: Vec<HyperNet>,
    size_bound: usize,
    budget: u64,
    evaluations: u64,
}

enum Step {
    Found(Vec<usize>),
    None,
    Exhausted,
}

impl Search<'_> {
    fn members(&self, alive: &[bool]) -> Vec<usize> {
        (0..alive.len()).filter(|&k| alive[k]).collect()
    }

    /// Shrink `alive` to the largest subset closed under symmetry with every
    /// witness present. Any hyperbasis inside `alive` survives this.
    fn fixpoint(&self, alive: &mut [bool]) {
        loop {
            let ids = self.members(alive);
            let h: Vec<HyperNet> = ids.iter().map(|&k| self.candidates[k].clone()).collect();
            let mut dead: Vec<usize> = symmetry_gaps(&h, false).into_iter().map(|(k, _)| k).collect();
            dead.extend(witness_gaps(self.ras, &h, false).into_iter().map(|(k, ..)| k));
            if dead.is_empty() {
                return;
            }
            for k in dead {
                alive[ids[k]] = false;
            }
        }
    }

    fn explore(&mut self, mut alive: Vec<bool>) -> Step {
        self.evaluations += 1;
        if self.evaluations > self.budget {
            return Step::Exhausted;
        }
        self.fixpoint(&mut alive);
        let ids = self.members(&alive);
        let h: Vec<HyperNet> = ids.iter().map(|&k| self.candidates[k].clone()).collect();
        if missing_atom(self.ras, &h).is_some() {
            return Step::None;
        }
        if let Some(&(i, j, ..)) = amalgamation_gaps(&h, true).first() {
            for drop in [ids[i], ids[j]] {
                let mut next = alive.clone();
                next[drop] = false;
                match self.explore(next) {
                    Step::None => {}
                    other => return other,
                }
            }
            return Step::None;
        }
        if ids.len() <= self.size_bound {
            return Step::Found(ids);
        }
        for &drop in &ids {
            let mut next = alive.clone();
            next[drop] = false;
            match self.explore(next) {
                Step::None => {}
                other => return other,
            }
        }
        Step::None
    }
}

/// Look for a hyperbasis of at most `size_bound` hypernetworks of width
/// `n` on `n` nodes, with constant hyperlabels below `lambda_bound`.
///
/// Starting from every candidate, members lacking a witness or a symmetric
/// image are discarded until nothing changes; amalgamation gaps and the
/// size bound are handled by branching on which member to drop, in
/// canonical order. Each branch costs one evaluation of `budget`.
pub fn search_hyperbasis(ras: &RaAtomStructure, n: usize, lambda_bound: u32, size_bound: usize, budget: u64) -> SearchOutcome {
    if lambda_bound == 0 || size_bound < ras.atom_count() || !(3..=4).contains(&n) || !check_ra_atomstructure(ras).pass() {
        return SearchOutcome::NoneWithinBounds {
            candidates: 0,
            evaluations: 0,
        };
    }
    let mut candidates: Vec<HyperNet> = enumerate_matrices(ras, n)
        .iter()
        .flat_map(|m| (0..lambda_bound).map(move |l| HyperNet::lift_constant(n, m, l)))
        .collect();
    candidates.sort();
    let count = candidates.len();
    let mut search = Search {
        ras,
        candidates,
        size_bound,
        budget,
        evaluations: 0,
    };
    match search.explore(vec![true; count]) {
        Step::Found(ids) => {
            let basis: Vec<HyperNet> = ids.iter().map(|&k| search.candidates[k].clone()).collect();
            debug_assert!(check_hyperbasis(ras, &basis, lambda_bound, CheckMode::Full).pass());
            SearchOutcome::Found {
                basis,
                evaluations: search.evaluations,
            }
        }
        Step::None => SearchOutcome::NoneWithinBounds {
            candidates: count,
            evaluations: search.evaluations,
        },
        Step::Exhausted => SearchOutcome::BudgetExhausted {
            evaluations: search.evaluations,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::monk::build_alpha;

    #[test]
    fn finds_the_full_matrix_set_on_a_triangle() {
        let ras = build_alpha(&Graph::complete(3), 3).unwrap();
        let SearchOutcome::Found { basis, .. } = search_hyperbasis(&ras, 3, 1, usize::MAX, 10) else { panic!() };
        assert_eq!(basis.len(), enumerate_matrices(&ras, 3).len());
        assert!(check_hyperbasis(&ras, &basis, 1, CheckMode::Full).pass());
    }

    #[test]
    fn size_bound_below_atom_count_finds_nothing() {
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        assert!(matches!(search_hyperbasis(&ras, 3, 1, 3, 10), SearchOutcome::NoneWithinBounds { .. }));
    }

    #[test]
    fn broken_ra_laws_find_nothing() {
        let bad = RaAtomStructure::from_predicate(3, vec![0], vec![0, 1, 2], |_, _, _| true).unwrap();
        assert!(!check_ra_atomstructure(&bad).pass());
        assert!(matches!(search_hyperbasis(&bad, 3, 1, 1000, 10), SearchOutcome::NoneWithinBounds { .. }));
    }

    #[test]
    fn two_hyperlabels_give_two_copies() {
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        let SearchOutcome::Found { basis, .. } = search_hyperbasis(&ras, 3, 2, usize::MAX, 10) else { panic!() };
        assert_eq!(basis.len(), 2 * enumerate_matrices(&ras, 3).len());
        assert!(check_hyperbasis(&ras, &basis, 2, CheckMode::Full).pass());
    }

    #[test]
    fn tight_budget_is_reported() {
        let ras = build_alpha(&Graph::complete(2), 3).unwrap();
        let total = enumerate_matrices(&ras, 3).len();
        assert!(matches!(search_hyperbasis(&ras, 3, 1, total - 1, 3), SearchOutcome::BudgetExhausted { .. }));
    }
}
