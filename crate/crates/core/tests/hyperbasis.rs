use proptest::prelude::*;

use cylbench_core::graphs::Graph;
use cylbench_core::hyperbasis::{all_maps, check_hypernet, hyper_tuples, HyperNet};
use cylbench_core::monk::{build_alpha, enumerate_matrices, RaAtomStructure};

fn triangle() -> (RaAtomStructure, Vec<Vec<u32>>) {
    let ras = build_alpha(&Graph::complete(3), 3).unwrap();
    let mats = enumerate_matrices(&ras, 3);
    (ras, mats)
}

fn arb_hypernet() -> impl Strategy<Value = HyperNet> {
    let (_, mats) = triangle();
    let tuples = hyper_tuples(3, 3);
    (0..mats.len(), proptest::collection::vec(0u32..3, tuples.len())).prop_map(move |(k, labels)| {
        let mut h = HyperNet::lift(3, &mats[k]);
        for (t, l) in tuples.iter().zip(labels) {
            if l != 0 {
                h.hyper.insert(t.clone(), l);
            }
        }
        h
    })
}

fn arb_map() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0usize..3, 3)
}

proptest! {
    #[test]
    fn identity_map_fixes_a_hypernet(h in arb_hypernet()) {
        prop_assert_eq!(h.compose(&[0, 1, 2]), h);
    }

    #[test]
    fn composition_is_a_right_action(h in arb_hypernet(), sigma in arb_map(), tau in arb_map()) {
        let st: Vec<usize> = tau.iter().map(|&x| sigma[x]).collect();
        prop_assert_eq!(h.compose(&sigma).compose(&tau), h.compose(&st));
    }

    #[test]
    fn permuting_a_lifted_matrix_keeps_it_a_hypernet(k in 0usize..10_000, p in 0usize..6) {
        let (ras, mats) = triangle();
        let h = HyperNet::lift(3, &mats[k % mats.len()]);
        let perms: Vec<Vec<usize>> = all_maps(3).into_iter().filter(|s| { let mut t = s.clone(); t.sort(); t == [0, 1, 2] }).collect();
        prop_assert!(check_hypernet(&ras, &h.compose(&perms[p]), 1).is_ok());
    }

    #[test]
    fn restriction_forgets_exactly_the_skipped_node(h in arb_hypernet(), skip in 0usize..3) {
        let (atoms, hyper) = h.restriction_key(&[skip]);
        for x in 0..3 {
            for y in 0..3 {
                let want = if x == skip || y == skip { u32::MAX } else { h.atom(x, y) };
                prop_assert_eq!(atoms[x * 3 + y], want);
            }
        }
        prop_assert!(hyper.iter().all(|(t, _)| !t.contains(&(skip as u8))));
    }
}

#[test]
fn sampled_lifted_matrices_are_hypernets() {
    let (ras, mats) = triangle();
    for m in mats.iter().step_by(17) {
        let h = HyperNet::lift(3, m);
        assert!(check_hypernet(&ras, &h, 1).is_ok());
    }
}
