use serde::Serialize;

use super::graph::{check_consistency, check_yellows, subsets, triangle_allowed, ColouredGraph, Violation};
use super::palette::{Colour, Preset};
use crate::graphs::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CompletionError {
    /// The input does not have the required shape.
    Precondition(String),
    /// The labelled part is already inconsistent.
    Inconsistent(Violation),
    /// The strategy produced an inconsistent graph.
    Blocked(Violation),
}

/// Check the shape shared by both completion variants: `delta` is a node,
/// `face` has fewer than `n` other nodes, every edge avoiding `delta` and
/// every edge from `delta` into `face` is labelled.
fn shape(nodes: usize, n: usize, delta: usize, face: &[usize], labelled: impl Fn(usize, usize) -> bool) -> Result<(), CompletionError> {
    let bad = |m: String| Err(CompletionError::Precondition(m));
    if delta >= nodes {
        return bad(format!("node {delta} does not exist"));
    }
    if face.len() >= n {
        return bad(format!("face of size {} is not below the dimension", face.len()));
    }
    for (a, &f) in face.iter().enumerate() {
        if f == delta || f >= nodes || face[..a].contains(&f) {
            return bad(format!("bad face node {f}"));
        }
        if !labelled(delta, f) {
            return bad(format!("edge ({delta}, {f}) is unlabelled"));
        }
    }
    for v in 0..nodes {
        for u in 0..v {
            if u != delta && v != delta && !labelled(u, v) {
                return bad(format!("edge ({u}, {v}) is unlabelled"));
            }
        }
    }
    Ok(())
}

/// The rainbow completion: every unlabelled edge `(β, δ)` gets `w_0` unless
/// some face node sees both `β` and `δ` through tints; failing that the
/// least `w_i` (`0 < i < n−1`) whose green `g_i` no face node sees on both;
/// failing that `ρ`. New `(n−1)`-sets get `y_S` with `S` the tints of the
/// cones on them.
pub fn complete_colouring(p: &Preset, partial: &ColouredGraph, delta: usize, face: &[usize]) -> Result<ColouredGraph, CompletionError> {
    let n = p.palette.n;
    let m = partial.node_count();
    shape(m, n, delta, face, |u, v| partial.edge(u, v).is_some())?;
    let rest: Vec<usize> = (0..m).filter(|&v| v != delta).collect();
    check_consistency(p, &partial.induced(&rest)).map_err(CompletionError::Inconsistent)?;
    let mut star: Vec<usize> = face.to_vec();
    star.push(delta);
    star.sort_unstable();
    for (c, &z) in star.iter().enumerate() {
        for (b, &y) in star[..c].iter().enumerate() {
            for &x in &star[..b] {
                let (a, bb, cc) = (partial.edge(x, y).expect("labelled"), partial.edge(y, z).expect("labelled"), partial.edge(x, z).expect("labelled"));
                if !triangle_allowed(p, a, bb, cc) {
                    return Err(CompletionError::Inconsistent(Violation::Triangle {
                        nodes: [x, y, z],
                        colours: [a.to_string(), bb.to_string(), cc.to_string()],
                    }));
                }
            }
        }
    }
    if face.len() == n - 1 && !partial.has_internal_green(face) {
        if let (Some(mask), Some(t)) = (partial.yellow(face), partial.cone_tint(face, delta)) {
            if mask & (1 << t) == 0 {
                return Err(CompletionError::Inconsistent(Violation::Cone {
                    base: face.to_vec(),
                    apex: delta,
                    tint: t,
                    yellow: mask,
                }));
            }
        }
    }

    let mut g = partial.clone();
    for beta in 0..m {
        if beta == delta || face.contains(&beta) {
            continue;
        }
        let both = |pred: &dyn Fn(Colour) -> bool| face.iter().any(|&f| pred(g.edge(beta, f).expect("labelled")) && pred(g.edge(delta, f).expect("labelled")));
        let colour = if !both(&|c| matches!(c, Colour::Tint(_))) {
            Colour::White(0)
        } else if let Some(i) = (1..n - 1).find(|&i| !both(&|c| c == Colour::Green(i as u8))) {
            Colour::White(i as u8)
        } else {
            Colour::Shade
        };
        g.set_edge(beta, delta, colour);
    }
    for set in subsets(m, n - 1) {
        if !set.contains(&delta) {
            continue;
        }
        if g.has_internal_green(&set) {
            g.clear_yellow(&set);
        } else {
            let mask = g.cone_tints(&set);
            g.set_yellow(&set, mask);
        }
    }
    check_consistency(p, &g).map_err(CompletionError::Blocked)?;
    Ok(g)
}

/// Every way for `∃` to label the unlabelled edges at `delta` with atom
/// colours so that the graph stays consistent. Yellows on new sets are the
/// least allowed, `y_S` with `S` the tints of the cones on them.
pub fn all_completions(p: &Preset, partial: &ColouredGraph, delta: usize) -> Vec<ColouredGraph> {
    let m = partial.node_count();
    let open: Vec<usize> = (0..m).filter(|&b| b != delta && partial.edge(b, delta).is_none()).collect();
    let colours = p.palette.colours();
    let mut out = Vec::new();
    let mut g = partial.clone();
    fn go(p: &Preset, colours: &[Colour], open: &[usize], delta: usize, at: usize, g: &mut ColouredGraph, out: &mut Vec<ColouredGraph>) {
        let Some(&beta) = open.get(at) else {
            let mut h = g.clone();
            for set in subsets(h.node_count(), p.palette.n - 1) {
                if set.contains(&delta) {
                    if h.has_internal_green(&set) {
                        h.clear_yellow(&set);
                    } else {
                        let mask = h.cone_tints(&set);
                        h.set_yellow(&set, mask);
                    }
                }
            }
            if check_yellows(p, &h).is_ok() {
                out.push(h);
            }
            return;
        };
        for &c in colours {
            g.set_edge(beta, delta, c);
            let ok = (0..g.node_count()).filter(|&x| x != beta && x != delta).all(|x| {
                if g.edge(x, delta).is_none() {
                    return true;
                }
                let mut tri = [x, beta, delta];
                tri.sort_unstable();
                let [a, b, c] = tri;
                triangle_allowed(p, g.edge(a, b).expect("set"), g.edge(b, c).expect("set"), g.edge(a, c).expect("set"))
            });
            if ok {
                go(p, colours, open, delta, at + 1, g, out);
            }
        }
        g.clear_edge(beta, delta);
    }
    go(p, &colours, &open, delta, 0, &mut g, &mut out);
    out
}

/// A Monk label: a graph node or `ρ`, and a colour below the dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonkLabel {
    pub node: Option<u32>,
    pub colour: u8,
}

/// A complete graph labelled by Monk labels, symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonkGraph {
    nodes: usize,
    edges: Vec<Option<MonkLabel>>,
}

impl MonkGraph {
    pub fn new(nodes: usize) -> MonkGraph {
        MonkGraph {
            nodes,
            edges: vec![None; nodes * nodes],
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edge(&self, u: usize, v: usize) -> Option<MonkLabel> {
        self.edges[u * self.nodes + v]
    }

    pub fn set_edge(&mut self, u: usize, v: usize, l: MonkLabel) {
        assert!(u != v);
        self.edges[u * self.nodes + v] = Some(l);
        self.edges[v * self.nodes + u] = Some(l);
    }
}

/// A triangle is allowed unless it is monochromatic and its labels neither
/// span an edge of `g` nor use `ρ` enough: all-ρ-free triangles need an edge
/// among their nodes, one `ρ` needs the other two adjacent, two or more
/// `ρ` are always allowed.
pub fn monk_triangle_ok(g: &Graph, a: MonkLabel, b: MonkLabel, c: MonkLabel) -> bool {
    if a.colour != b.colour || b.colour != c.colour {
        return true;
    }
    let nodes: Vec<u32> = [a, b, c].iter().filter_map(|l| l.node).collect();
    match nodes.len() {
        3 | 2 => g.edge_within(&nodes).is_some(),
        _ => true,
    }
}

pub fn check_monk(g: &Graph, mg: &MonkGraph) -> Result<(), Violation> {
    let m = mg.node_count();
    for z in 0..m {
        for y in 0..z {
            for x in 0..y {
                let labels = [mg.edge(x, y), mg.edge(y, z), mg.edge(x, z)];
                let Some([a, b, c]) = labels.iter().copied().collect::<Option<Vec<_>>>().map(|v| [v[0], v[1], v[2]]) else {
                    let (u, v) = if mg.edge(x, y).is_none() { (x, y) } else if mg.edge(y, z).is_none() { (y, z) } else { (x, z) };
                    return Err(Violation::Unlabelled { u, v });
                };
                if !monk_triangle_ok(g, a, b, c) {
                    let show = |l: MonkLabel| format!("{}:{}", l.node.map_or("rho".to_string(), |v| v.to_string()), l.colour);
                    return Err(Violation::Triangle {
                        nodes: [x, y, z],
                        colours: [show(a), show(b), show(c)],
                    });
                }
            }
        }
    }
    Ok(())
}

/// The Monk completion: pick the least colour `i < n` not used on the face
/// edges at `delta` and label every other edge at `delta` with `(ρ, i)`.
pub fn complete_monk(g: &Graph, n: usize, partial: &MonkGraph, delta: usize, face: &[usize]) -> Result<(MonkGraph, u8), CompletionError> {
    let m = partial.node_count();
    shape(m, n, delta, face, |u, v| partial.edge(u, v).is_some())?;
    let used: Vec<u8> = face.iter().map(|&f| partial.edge(delta, f).expect("labelled").colour).collect();
    let i = (0..n as u8)
        .find(|c| !used.contains(c))
        .ok_or_else(|| CompletionError::Precondition("no free colour".into()))?;
    let mut out = partial.clone();
    for beta in 0..m {
        if beta != delta && !face.contains(&beta) {
            out.set_edge(beta, delta, MonkLabel { node: None, colour: i });
        }
    }
    check_monk(g, &out).map_err(CompletionError::Blocked)?;
    Ok((out, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rainbow::enumerate::{enumerate_atoms, DEFAULT_RAINBOW_BOUND};

    /// Add a node joined to `face` with the given colours.
    fn demand(g: &ColouredGraph, face: &[usize], colours: &[Colour]) -> (ColouredGraph, usize) {
        let mut h = g.clone();
        let d = h.add_node();
        for (&f, &c) in face.iter().zip(colours) {
            h.set_edge(f, d, c);
        }
        (h, d)
    }

    #[test]
    fn no_greens_means_w0() {
        let p = Preset::smooth(3).unwrap();
        let mut g = ColouredGraph::new(p.palette.red_rule, 3);
        g.set_edge(0, 1, Colour::White(1));
        g.set_edge(1, 2, Colour::White(0));
        g.set_edge(0, 2, Colour::Red { sup: 0, j: 0, k: 1 });
        for s in subsets(3, 2) {
            g.set_yellow(&s, 0);
        }
        let (h, d) = demand(&g, &[0, 1], &[Colour::White(0), Colour::White(1)]);
        let out = complete_colouring(&p, &h, d, &[0, 1]).unwrap();
        assert_eq!(out.edge(2, d), Some(Colour::White(0)));
    }

    #[test]
    fn two_same_tint_cones_force_shade() {
        let p = Preset::smooth(3).unwrap();
        // base 0,1; apex 2 is a 0-cone; the new node 3 is another 0-cone
        let mut g = ColouredGraph::new(p.palette.red_rule, 3);
        g.set_edge(0, 1, Colour::White(0));
        g.set_edge(0, 2, Colour::Tint(0));
        g.set_edge(1, 2, Colour::Green(1));
        g.set_yellow(&[0, 1], p.palette.yellow_universe());
        let (h, d) = demand(&g, &[0, 1], &[Colour::Tint(0), Colour::Green(1)]);
        let out = complete_colouring(&p, &h, d, &[0, 1]).unwrap();
        assert_eq!(out.edge(2, d), Some(Colour::Shade));
        assert_eq!(out.yellow(&[2, 3]), Some(0));
    }

    #[test]
    fn completion_is_consistent_on_every_face_of_every_small_atom() {
        for name in ["mini"] {
            let p = Preset::named(name).unwrap();
            let s = enumerate_atoms(&p, DEFAULT_RAINBOW_BOUND).unwrap();
            let colours = p.palette.colours();
            let mut runs = 0;
            for a in s.atoms.iter().filter(|a| a.graph.node_count() == 3) {
                for face in subsets(3, 2) {
                    for &c0 in &colours {
                        for &c1 in &colours {
                            let (h, d) = demand(&a.graph, &face, &[c0, c1]);
                            match complete_colouring(&p, &h, d, &face) {
                                Ok(out) => {
                                    check_consistency(&p, &out).unwrap();
                                    runs += 1;
                                }
                                Err(CompletionError::Inconsistent(_)) => {}
                                Err(e) => panic!("{e:?}"),
                            }
                        }
                    }
                }
            }
            assert!(runs > 1000, "{runs}");
        }
    }

    #[test]
    fn all_completions_are_consistent_and_include_the_white_one() {
        let p = Preset::smooth(3).unwrap();
        let mut g = ColouredGraph::new(p.palette.red_rule, 3);
        g.set_edge(0, 1, Colour::White(0));
        g.set_edge(0, 2, Colour::Tint(0));
        g.set_edge(1, 2, Colour::Green(1));
        g.set_yellow(&[0, 1], p.palette.yellow_universe());
        let (h, d) = demand(&g, &[0, 1], &[Colour::Tint(1), Colour::Green(1)]);
        let all = all_completions(&p, &h, d);
        // only reds are possible between two apexes of different tints
        assert_eq!(all.len(), p.palette.reds().len());
        for out in &all {
            check_consistency(&p, out).unwrap();
        }
    }

    #[test]
    fn monk_completion_uses_a_fresh_colour() {
        let g = Graph::cycle(5);
        let mut mg = MonkGraph::new(4);
        let l = |v: u32, c: u8| MonkLabel { node: Some(v), colour: c };
        mg.set_edge(0, 1, l(0, 0));
        mg.set_edge(0, 2, l(1, 1));
        mg.set_edge(1, 2, l(2, 2));
        mg.set_edge(3, 0, l(0, 1));
        mg.set_edge(3, 1, l(3, 0));
        let (out, i) = complete_monk(&g, 3, &mg, 3, &[0, 1]).unwrap();
        assert_eq!(i, 2);
        assert_eq!(out.edge(2, 3), Some(MonkLabel { node: None, colour: 2 }));
        check_monk(&g, &out).unwrap();
    }

    #[test]
    fn monk_triangle_rule() {
        let g = Graph::cycle(5);
        let l = |v: Option<u32>, c: u8| MonkLabel { node: v, colour: c };
        assert!(!monk_triangle_ok(&g, l(Some(0), 0), l(Some(2), 0), l(Some(0), 0)));
        assert!(monk_triangle_ok(&g, l(Some(0), 0), l(Some(1), 0), l(Some(3), 0)));
        assert!(monk_triangle_ok(&g, l(Some(0), 0), l(Some(2), 1), l(Some(0), 0)));
        assert!(!monk_triangle_ok(&g, l(None, 0), l(Some(0), 0), l(Some(2), 0)));
        assert!(monk_triangle_ok(&g, l(None, 0), l(Some(0), 0), l(Some(1), 0)));
        assert!(monk_triangle_ok(&g, l(None, 0), l(None, 0), l(Some(0), 0)));
    }
}
