use std::collections::BTreeMap;

use serde::Serialize;

use super::palette::{Colour, Preset, RedRule, TintWhite};

/// A complete graph with coloured edges and yellow labels on some
/// `(n−1)`-sets of nodes. Edges are stored from their lower endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColouredGraph {
    rule: RedRule,
    nodes: usize,
    edges: Vec<Option<Colour>>,
    /// Sorted node sets to the tint-index mask `S` of `y_S`.
    yellows: BTreeMap<Vec<u8>, u32>,
}

/// Why a coloured graph is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    Unlabelled { u: usize, v: usize },
    /// Colours of `(x, y)`, `(y, z)`, `(x, z)` for `x < y < z`.
    Triangle { nodes: [usize; 3], colours: [String; 3] },
    MissingYellow { set: Vec<usize> },
    UnexpectedYellow { set: Vec<usize> },
    Cone { base: Vec<usize>, apex: usize, tint: u8, yellow: u32 },
}

fn slot(u: usize, v: usize) -> usize {
    debug_assert!(u < v);
    v * (v - 1) / 2 + u
}

impl ColouredGraph {
    pub fn new(rule: RedRule, nodes: usize) -> ColouredGraph {
        ColouredGraph {
            rule,
            nodes,
            edges: vec![None; nodes * nodes.saturating_sub(1) / 2],
            yellows: BTreeMap::new(),
        }
    }

    pub fn rule(&self) -> RedRule {
        self.rule
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// The colour of `(u, v)` read from `u`.
    pub fn edge(&self, u: usize, v: usize) -> Option<Colour> {
        assert!(u != v && u < self.nodes && v < self.nodes, "edge ({u}, {v}) out of range");
        if u < v {
            self.edges[slot(u, v)]
        } else {
            self.edges[slot(v, u)].map(|c| c.converse(self.rule))
        }
    }

    pub fn set_edge(&mut self, u: usize, v: usize, c: Colour) {
        assert!(u != v && u < self.nodes && v < self.nodes, "edge ({u}, {v}) out of range");
        let (lo, hi, c) = if u < v { (u, v, c) } else { (v, u, c.converse(self.rule)) };
        let c = match (c, self.rule) {
            (Colour::Red { sup, j, k }, RedRule::Pattern) if j > k => Colour::Red { sup, j: k, k: j },
            _ => c,
        };
        self.edges[slot(lo, hi)] = Some(c);
    }

    pub fn clear_edge(&mut self, u: usize, v: usize) {
        self.edges[slot(u.min(v), u.max(v))] = None;
    }

    /// Colours of the labelled edges, read from their lower endpoints.
    pub fn edge_colours(&self) -> impl Iterator<Item = Colour> + '_ {
        self.edges.iter().flatten().copied()
    }

    pub fn yellow(&self, set: &[usize]) -> Option<u32> {
        self.yellows.get(&key(set)).copied()
    }

    pub fn set_yellow(&mut self, set: &[usize], mask: u32) {
        self.yellows.insert(key(set), mask);
    }

    pub fn clear_yellow(&mut self, set: &[usize]) {
        self.yellows.remove(&key(set));
    }

    pub fn yellows(&self) -> impl Iterator<Item = (Vec<usize>, u32)> + '_ {
        self.yellows.iter().map(|(k, &m)| (k.iter().map(|&x| x as usize).collect(), m))
    }

    /// Append a node with no edges.
    pub fn add_node(&mut self) -> usize {
        let v = self.nodes;
        self.nodes += 1;
        self.edges.extend(std::iter::repeat(None).take(v));
        v
    }

    /// Delete node `v`, shifting later nodes down by one.
    pub fn remove_node(&mut self, v: usize) {
        let keep: Vec<usize> = (0..self.nodes).filter(|&x| x != v).collect();
        *self = self.induced(&keep);
    }

    /// The subgraph on `nodes`, renumbered in the given order.
    pub fn induced(&self, nodes: &[usize]) -> ColouredGraph {
        let mut g = ColouredGraph::new(self.rule, nodes.len());
        for (a, &u) in nodes.iter().enumerate() {
            for (b, &v) in nodes.iter().enumerate().skip(a + 1) {
                if let Some(c) = self.edge(u, v) {
                    g.set_edge(a, b, c);
                }
            }
        }
        let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(a, &u)| (u, a)).collect();
        for (set, mask) in self.yellows() {
            if let Some(mapped) = set.iter().map(|u| pos.get(u).copied()).collect::<Option<Vec<_>>>() {
                g.set_yellow(&mapped, mask);
            }
        }
        g
    }

    /// Whether `(u, v)` is green, for distinct nodes.
    fn green(&self, u: usize, v: usize) -> bool {
        self.edge(u, v).is_some_and(Colour::is_green)
    }

    /// Whether some edge inside `set` is green.
    pub fn has_internal_green(&self, set: &[usize]) -> bool {
        set.iter().enumerate().any(|(a, &u)| set[a + 1..].iter().any(|&v| self.green(u, v)))
    }

    /// The tint `t` if `apex` is the apex of a `t`-cone over `base`: one base
    /// node sees the apex through `g_0^t` and the others through `g_1, …,
    /// g_{n−2}`, one each.
    pub fn cone_tint(&self, base: &[usize], apex: usize) -> Option<u8> {
        let mut tint = None;
        let mut seen = 0u32;
        for &b in base {
            match self.edge(b, apex)? {
                Colour::Tint(t) if tint.is_none() => tint = Some(t),
                Colour::Green(i) if seen & (1 << i) == 0 => seen |= 1 << i,
                _ => return None,
            }
        }
        let want = ((1u32 << base.len()) - 1) & !1;
        (seen == want).then_some(tint?)
    }

    /// Tints of all cones over `base`.
    pub fn cone_tints(&self, base: &[usize]) -> u32 {
        (0..self.nodes)
            .filter(|v| !base.contains(v))
            .filter_map(|v| self.cone_tint(base, v))
            .fold(0, |m, t| m | 1 << t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut edges = Vec::new();
        for v in 0..self.nodes {
            for u in 0..v {
                if let Some(c) = self.edge(u, v) {
                    edges.push(serde_json::json!([u, v, c.to_string()]));
                }
            }
        }
        let yellows: Vec<_> = self.yellows().map(|(set, mask)| serde_json::json!({"nodes": set, "S": mask_list(mask)})).collect();
        serde_json::json!({"nodes": self.nodes, "edges": edges, "yellows": yellows})
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph coloured {\n");
        for v in 0..self.nodes {
            out += &format!("  {v};\n");
        }
        for v in 0..self.nodes {
            for u in 0..v {
                if let Some(c) = self.edge(u, v) {
                    out += &format!("  {u} -- {v} [label=\"{c}\", color=\"{}\"];\n", dot_colour(c));
                }
            }
        }
        for (set, mask) in self.yellows() {
            let names: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            out += &format!("  // y{:?} on {}\n", mask_list(mask), names.join(","));
        }
        out + "}\n"
    }
}

fn key(set: &[usize]) -> Vec<u8> {
    let mut k: Vec<u8> = set.iter().map(|&x| x as u8).collect();
    k.sort_unstable();
    k
}

pub fn mask_list(mask: u32) -> Vec<u32> {
    (0..32).filter(|t| mask & (1 << t) != 0).collect()
}

fn dot_colour(c: Colour) -> &'static str {
    match c {
        Colour::Green(_) | Colour::Tint(_) => "green",
        Colour::White(_) => "grey",
        Colour::Red { .. } => "red",
        Colour::Shade => "pink",
    }
}

/// All `k`-subsets of `0..n`, ascending.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Whether the triangle with colours `a = (x, y)`, `b = (y, z)`, `c = (x, z)`
/// is allowed, each read from its lower endpoint for `x < y < z`.
pub fn triangle_allowed(p: &Preset, a: Colour, b: Colour, c: Colour) -> bool {
    let cols = [a, b, c];
    if cols.iter().all(|c| c.is_green()) {
        return false;
    }
    for (i, &third) in cols.iter().enumerate() {
        let (u, v) = (cols[(i + 1) % 3], cols[(i + 2) % 3]);
        match (u, v, third) {
            (Colour::Tint(s), Colour::Tint(t), Colour::White(0)) => {
                if p.table.tint_white == TintWhite::Any || s != t {
                    return false;
                }
            }
            (Colour::Green(s), Colour::Green(t), Colour::White(w)) if s == t && s == w => return false,
            _ => {}
        }
    }
    if let [Colour::Red { sup: s1, j: j1, k: k1 }, Colour::Red { sup: s2, j: j2, k: k2 }, Colour::Red { sup: s3, j: j3, k: k3 }] = cols {
        if s1 != s2 || s2 != s3 {
            return false;
        }
        let ok = match p.palette.red_rule {
            RedRule::Pattern => {
                let mut pairs = [(j1, k1), (j2, k2), (j3, k3)];
                pairs.sort_unstable();
                let mut idx = [j1, k1, j2, k2, j3, k3];
                idx.sort_unstable();
                pairs[0] != pairs[1] && pairs[1] != pairs[2] && idx[0] == idx[1] && idx[2] == idx[3] && idx[4] == idx[5] && idx[1] != idx[2] && idx[3] != idx[4]
            }
            // x from (x,y) and (x,z), y from (x,y) and (y,z), z from (y,z) and (x,z)
            RedRule::Ordered => j1 == j3 && k1 == j2 && k2 == k3,
        };
        if !ok {
            return false;
        }
    }
    !p.table.tint_order || tint_order_ok(p, a, b, c)
}

/// For `x < y < z`: the apex is `x` (tints on `(x,y)`, `(x,z)`, red `(y,z)`),
/// `y` (tints on `(y,x)`, `(y,z)`, red `(x,z)`) or `z` (tints on `(z,x)`,
/// `(z,y)`, red `(x,y)`). The apex seeing the smaller tint value at `p`
/// needs the smaller red index at `p`.
fn tint_order_ok(p: &Preset, a: Colour, b: Colour, c: Colour) -> bool {
    // (tint to first, tint to second, red from first to second)
    let cases = [(a, c, b), (a, b, c), (c, b, a)];
    for (t1, t2, r) in cases {
        if let (Colour::Tint(s), Colour::Tint(t), Colour::Red { j, k, .. }) = (t1, t2, r) {
            let (vs, vt) = (p.palette.tints[s as usize], p.palette.tints[t as usize]);
            if (vs < vt && j >= k) || (vs > vt && j <= k) {
                return false;
            }
        }
    }
    true
}

/// Check a complete coloured graph against the preset.
pub fn check_consistency(p: &Preset, g: &ColouredGraph) -> Result<(), Violation> {
    let m = g.node_count();
    for v in 0..m {
        for u in 0..v {
            if g.edge(u, v).is_none() {
                return Err(Violation::Unlabelled { u, v });
            }
        }
    }
    for z in 0..m {
        for y in 0..z {
            for x in 0..y {
                let (a, b, c) = (g.edge(x, y).expect("complete"), g.edge(y, z).expect("complete"), g.edge(x, z).expect("complete"));
                if !triangle_allowed(p, a, b, c) {
                    return Err(Violation::Triangle {
                        nodes: [x, y, z],
                        colours: [a.to_string(), b.to_string(), c.to_string()],
                    });
                }
            }
        }
    }
    check_yellows(p, g)
}

/// The yellow and cone rules alone.
pub fn check_yellows(p: &Preset, g: &ColouredGraph) -> Result<(), Violation> {
    let n = p.palette.n;
    for (set, _) in g.yellows() {
        if set.len() != n - 1 || set.iter().any(|&x| x >= g.node_count()) || g.has_internal_green(&set) {
            return Err(Violation::UnexpectedYellow { set });
        }
    }
    for base in subsets(g.node_count(), n - 1) {
        if g.has_internal_green(&base) {
            continue;
        }
        let Some(mask) = g.yellow(&base) else {
            return Err(Violation::MissingYellow { set: base });
        };
        if mask & !p.palette.yellow_universe() != 0 {
            return Err(Violation::UnexpectedYellow { set: base });
        }
        for apex in 0..g.node_count() {
            if base.contains(&apex) {
                continue;
            }
            if let Some(t) = g.cone_tint(&base, apex) {
                if mask & (1 << t) == 0 {
                    return Err(Violation::Cone { base, apex, tint: t, yellow: mask });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle(p: &Preset, a: Colour, b: Colour, c: Colour) -> ColouredGraph {
        let mut g = ColouredGraph::new(p.palette.red_rule, 3);
        g.set_edge(0, 1, a);
        g.set_edge(1, 2, b);
        g.set_edge(0, 2, c);
        for set in subsets(3, 2) {
            if !g.has_internal_green(&set) {
                g.set_yellow(&set, p.palette.yellow_universe());
            }
        }
        g
    }

    fn red(sup: u8, j: u8, k: u8) -> Colour {
        Colour::Red { sup, j, k }
    }

    #[test]
    fn green_triangles_are_forbidden() {
        let p = Preset::smooth(3).unwrap();
        let greens: Vec<Colour> = p.palette.greens().collect();
        for &a in &greens {
            for &b in &greens {
                for &c in &greens {
                    assert!(matches!(check_consistency(&p, &triangle(&p, a, b, c)), Err(Violation::Triangle { .. })));
                }
            }
        }
    }

    #[test]
    fn tint_white_rule() {
        let p = Preset::smooth(3).unwrap();
        let w = Colour::White(0);
        assert!(check_consistency(&p, &triangle(&p, Colour::Tint(0), Colour::Tint(1), w)).is_err());
        assert!(check_consistency(&p, &triangle(&p, Colour::Tint(2), w, Colour::Tint(2))).is_ok());
        let mut strict = p.clone();
        strict.table.tint_white = TintWhite::Any;
        assert!(check_consistency(&strict, &triangle(&strict, Colour::Tint(2), w, Colour::Tint(2))).is_err());
        let g = Colour::Green(1);
        assert!(check_consistency(&p, &triangle(&p, g, g, Colour::White(1))).is_err());
        assert!(check_consistency(&p, &triangle(&p, g, g, w)).is_ok());
    }

    #[test]
    fn whites_and_reds() {
        let p = Preset::smooth(3).unwrap();
        let w = Colour::White(0);
        assert!(check_consistency(&p, &triangle(&p, w, w, Colour::White(1))).is_ok());
        assert!(check_consistency(&p, &triangle(&p, red(0, 0, 1), red(0, 1, 2), red(0, 0, 2))).is_ok());
        assert!(check_consistency(&p, &triangle(&p, red(0, 0, 1), red(1, 1, 2), red(0, 0, 2))).is_err());
        assert!(check_consistency(&p, &triangle(&p, red(0, 0, 1), red(0, 0, 1), red(0, 0, 2))).is_err());
        assert!(check_consistency(&p, &triangle(&p, red(0, 0, 1), red(0, 2, 3), red(0, 0, 2))).is_err());
        assert!(check_consistency(&p, &triangle(&p, Colour::Shade, Colour::Shade, Colour::Shade)).is_ok());
    }

    #[test]
    fn ordered_reds_need_one_index_per_node() {
        let p = Preset::descent(3).unwrap();
        // x=0, y=1, z=2 carrying indices 0, 1, 2
        assert!(check_consistency(&p, &triangle(&p, red(0, 0, 1), red(0, 1, 2), red(0, 0, 2))).is_ok());
        assert!(check_consistency(&p, &triangle(&p, red(0, 0, 1), red(0, 2, 1), red(0, 0, 2))).is_err());
    }

    #[test]
    fn tints_order_the_red_indices() {
        let p = Preset::descent(3).unwrap();
        // node 0 sees node 1 with value 0 and node 2 with value −1
        let ok = triangle(&p, Colour::Tint(0), red(0, 2, 1), Colour::Tint(1));
        assert!(check_consistency(&p, &ok).is_ok());
        let bad = triangle(&p, Colour::Tint(0), red(0, 1, 2), Colour::Tint(1));
        assert!(check_consistency(&p, &bad).is_err());
        let same = triangle(&p, Colour::Tint(1), red(0, 1, 2), Colour::Tint(1));
        assert!(check_consistency(&p, &same).is_ok());
    }

    #[test]
    fn cones_need_their_tint_in_the_yellow() {
        let p = Preset::smooth(3).unwrap();
        let mut g = triangle(&p, Colour::White(0), Colour::Green(1), Colour::Tint(3));
        assert!(check_consistency(&p, &g).is_ok());
        assert_eq!(g.cone_tints(&[0, 1]), 1 << 3);
        g.set_yellow(&[0, 1], 1 << 2);
        assert!(matches!(check_consistency(&p, &g), Err(Violation::Cone { apex: 2, tint: 3, .. })));
        g.clear_yellow(&[0, 1]);
        assert!(matches!(check_consistency(&p, &g), Err(Violation::MissingYellow { .. })));
        g.set_yellow(&[0, 1], 1 << 3);
        g.set_yellow(&[0, 2], 1);
        assert!(matches!(check_consistency(&p, &g), Err(Violation::UnexpectedYellow { .. })));
    }

    #[test]
    fn incomplete_labelling_is_reported() {
        let p = Preset::smooth(3).unwrap();
        let g = ColouredGraph::new(p.palette.red_rule, 2);
        assert_eq!(check_consistency(&p, &g), Err(Violation::Unlabelled { u: 0, v: 1 }));
    }

    #[test]
    fn node_removal_keeps_labels() {
        let p = Preset::descent(2).unwrap();
        let mut g = triangle(&p, red(0, 0, 1), Colour::White(0), Colour::White(1));
        g.remove_node(0);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge(0, 1), Some(Colour::White(0)));
        assert_eq!(g.yellow(&[0, 1]), Some(p.palette.yellow_universe()));
        let mut h = triangle(&p, red(0, 0, 1), Colour::White(0), Colour::White(1));
        h.remove_node(2);
        assert_eq!(h.edge(1, 0), Some(red(0, 1, 0)));
    }
}
