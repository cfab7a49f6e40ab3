use proptest::prelude::*;

use cylbench_core::graphs::Graph;
use cylbench_core::monk::{
    basic_matrices, build_alpha, check_cylindric_basis, check_ra_atomstructure, enumerate_matrices, is_coherent, monochromatic_obstruction,
    transpose, Monochromatic,
};

fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for v in 0..n as u32 {
                for u in 0..v {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn alpha_shape(g in arb_graph(6), n in 3usize..=4) {
        let ras = build_alpha(&g, n).unwrap();
        prop_assert_eq!(ras.atom_count(), 1 + g.node_count() * n);
        for a in 0..ras.atom_count() as u32 {
            prop_assert_eq!(ras.converse(a), a);
        }
    }

    #[test]
    fn consistency_ignores_triangle_order(g in arb_graph(5), n in 3usize..=4) {
        let ras = build_alpha(&g, n).unwrap();
        let k = ras.atom_count() as u32;
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    let v = ras.consistent(a, b, c);
                    for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                        prop_assert_eq!(ras.consistent(x, y, z), v, "{} {} {}", a, b, c);
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_is_a_relation_algebra(g in arb_graph(5), n in 3usize..=4) {
        let ras = build_alpha(&g, n).unwrap();
        prop_assert!(check_ra_atomstructure(&ras).pass());
    }

    #[test]
    fn matrices_are_coherent_and_closed_under_transposition(g in arb_graph(4)) {
        let ras = build_alpha(&g, 3).unwrap();
        let mats = enumerate_matrices(&ras, 3);
        let keys: std::collections::HashSet<Vec<u32>> = mats.iter().cloned().collect();
        for m in &mats {
            prop_assert!(is_coherent(&ras, 3, m));
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                prop_assert!(keys.contains(&transpose(3, m, i, j)));
            }
        }
    }

    #[test]
    fn monochromatic_elements_vanish_exactly_on_independent_sets(g in arb_graph(6), mask in 1u32..64, colour in 0usize..3) {
        let nodes: Vec<u32> = (0..g.node_count() as u32).filter(|v| mask >> v & 1 == 1).collect();
        prop_assume!(!nodes.is_empty());
        let ras = build_alpha(&g, 3).unwrap();
        let r = monochromatic_obstruction(&ras, &Monochromatic::Colour { nodes: nodes.clone(), colour });
        prop_assert_eq!(r.zero, g.is_independent(&nodes));
    }
}

#[test]
fn small_graphs_give_cylindric_bases() {
    for g in [Graph::empty(1), Graph::path(3), Graph::complete(2)] {
        let ras = build_alpha(&g, 3).unwrap();
        let mats = basic_matrices(&ras, 3).unwrap();
        assert!(check_cylindric_basis(&mats, &ras).pass());
    }
}
