use proptest::prelude::*;

use cylbench_core::rainbow::{
    check_consistency, complete_colouring, enumerate_atoms, subsets, triangle_allowed, Colour, ColouredGraph, CompletionError, Preset,
    DEFAULT_RAINBOW_BOUND,
};

fn presets() -> Vec<Preset> {
    let mut out: Vec<Preset> = Preset::bundled_names().iter().map(|n| Preset::named(n).unwrap()).collect();
    for n in 3..=4 {
        out.push(Preset::smooth(n).unwrap());
    }
    out.push(Preset::descent(3).unwrap());
    out.push(Preset::wide_reds(10).unwrap());
    out
}

#[test]
fn green_triangles_are_never_allowed() {
    for p in presets() {
        let greens: Vec<Colour> = p.palette.colours().into_iter().filter(|c| c.is_green()).collect();
        for &a in &greens {
            for &b in &greens {
                for &c in &greens {
                    assert!(!triangle_allowed(&p, a, b, c), "{}: {a} {b} {c}", p.name);
                }
            }
        }
    }
}

#[test]
fn enumerated_atoms_have_no_green_triangle() {
    let p = Preset::named("mini").unwrap();
    let s = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
    for a in &s.atoms {
        let g = &a.graph;
        for t in subsets(g.node_count(), 3) {
            let e = [g.edge(t[0], t[1]), g.edge(t[1], t[2]), g.edge(t[0], t[2])];
            assert!(!e.iter().all(|c| c.is_some_and(Colour::is_green)), "{t:?}");
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let p = Preset::named("mini").unwrap();
    let a = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
    let b = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
    let json = |s: &cylbench_core::rainbow::RainbowStructure| (0..s.atoms.len()).map(|k| s.atom_json(k)).collect::<Vec<_>>();
    assert_eq!(json(&a), json(&b));
}

/// A labelled triangle for the smooth preset at `n = 3` plus a new node
/// joined to a face of it.
fn smooth_demand() -> impl Strategy<Value = (ColouredGraph, usize, Vec<usize>)> {
    let p = Preset::smooth(3).unwrap();
    let colours = p.palette.colours();
    let k = colours.len();
    let universe = p.palette.yellow_universe();
    (
        proptest::collection::vec(0..k, 3),
        proptest::collection::vec(0..=universe, 3),
        0usize..3,
        proptest::collection::vec(0..k, 2),
    )
        .prop_map(move |(edges, masks, skip, demand)| {
            let mut g = ColouredGraph::new(p.palette.red_rule, 3);
            g.set_edge(0, 1, colours[edges[0]]);
            g.set_edge(1, 2, colours[edges[1]]);
            g.set_edge(0, 2, colours[edges[2]]);
            for (s, mask) in subsets(3, 2).into_iter().zip(masks) {
                if !g.has_internal_green(&s) {
                    g.set_yellow(&s, mask & universe);
                }
            }
            let face: Vec<usize> = (0..3).filter(|&v| v != skip).collect();
            let d = g.add_node();
            for (&f, &c) in face.iter().zip(&demand) {
                g.set_edge(f, d, colours[c]);
            }
            (g, d, face)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn completion_output_is_consistent((g, d, face) in smooth_demand()) {
        let p = Preset::smooth(3).unwrap();
        match complete_colouring(&p, &g, d, &face) {
            Ok(out) => prop_assert!(check_consistency(&p, &out).is_ok(), "{:?}", check_consistency(&p, &out)),
            Err(CompletionError::Inconsistent(_)) => {}
            Err(e) => prop_assert!(false, "{e:?}"),
        }
    }

    #[test]
    fn pattern_triangles_ignore_corner_order(a in 0usize..1024, b in 0usize..1024, c in 0usize..1024) {
        let p = Preset::smooth(3).unwrap();
        let colours = p.palette.colours();
        let k = colours.len();
        let (a, b, c) = (colours[a % k], colours[b % k], colours[c % k]);
        let v = triangle_allowed(&p, a, b, c);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            prop_assert_eq!(triangle_allowed(&p, x, y, z), v);
        }
    }
}
