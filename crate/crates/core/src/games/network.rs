use serde::Serialize;

use super::solve::Game;
use crate::bao::{AtomSet, CaAtomStructure};
use crate::combinat::permutations;

const UNKNOWN: u32 = u32::MAX;

/// Atom labels on every `n`-tuple over nodes `0..nodes`, stored at
/// `Σ x_p · nodes^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Network {
    pub dim: usize,
    pub nodes: usize,
    pub labels: Vec<u32>,
}

impl Network {
    pub fn index(&self, tuple: &[usize]) -> usize {
        tuple_index(self.nodes, tuple)
    }

    pub fn label(&self, tuple: &[usize]) -> u32 {
        self.labels[self.index(tuple)]
    }

    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        tuple_of(self.dim, self.nodes, idx)
    }

    /// Restrict to the nodes other than `v`, renumbering the rest in order.
    pub fn without(&self, v: usize) -> Network {
        let keep: Vec<usize> = (0..self.nodes).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// The network on `keep[0], keep[1], …` renamed `0, 1, …`.
    pub fn induced(&self, keep: &[usize]) -> Network {
        let k = keep.len();
        let total = k.pow(self.dim as u32);
        let labels = (0..total)
            .map(|idx| {
                let t: Vec<usize> = tuple_of(self.dim, k, idx).into_iter().map(|x| keep[x]).collect();
                self.label(&t)
            })
            .collect();
        Network {
            dim: self.dim,
            nodes: k,
            labels,
        }
    }

    /// A node `w` with `label(tuple[i ↦ w]) = atom`, if any.
    pub fn witness(&self, tuple: &[usize], i: usize, atom: u32) -> Option<usize> {
        let mut t = tuple.to_vec();
        (0..self.nodes).find(|&w| {
            t[i] = w;
            self.label(&t) == atom
        })
    }
}

fn tuple_index(nodes: usize, tuple: &[usize]) -> usize {
    tuple.iter().rev().fold(0, |acc, &x| acc * nodes + x)
}

fn tuple_of(dim: usize, nodes: usize, mut idx: usize) -> Vec<usize> {
    (0..dim)
        .map(|_| {
            let x = idx % nodes;
            idx /= nodes;
            x
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NetworkViolation {
    Shape,
    Unlabelled(Vec<usize>),
    /// `label(x̄) ∈ d_ij` disagrees with `x_i = x_j`.
    Diagonal { tuple: Vec<usize>, i: usize, j: usize },
    /// `label(x̄)` and `label(x̄[i ↦ z])` are not `R_ci`-related.
    Cylindrifier { tuple: Vec<usize>, i: usize, z: usize },
    /// `label(x̄ ∘ [i, j])` is not the transposition of `label(x̄)`.
    Transposition { tuple: Vec<usize>, i: usize, j: usize },
}

/// Per-atom lookups used by the extension search.
pub struct Frame<'a> {
    pub structure: &'a CaAtomStructure,
    dim: usize,
    pairs: Vec<(usize, usize)>,
    /// `neighbours[i][a]`: the atoms `R_ci`-related to `a`.
    neighbours: Vec<Vec<AtomSet>>,
    /// Atoms by the set of pairs `i < j` whose diagonal contains them.
    by_pattern: Vec<AtomSet>,
    /// `swaps[p][a]`: the image of `a` under the transposition of pair `p`.
    swaps: Option<Vec<Vec<AtomSet>>>,
    /// Atoms fixed by the transposition of pair `p`.
    swap_fixed: Vec<AtomSet>,
    /// Atoms related to themselves by every `R_ci`.
    reflexive: AtomSet,
    words: usize,
    layouts: Vec<std::sync::OnceLock<Layout>>,
}

impl<'a> Frame<'a> {
    pub fn new(s: &'a CaAtomStructure) -> Frame<'a> {
        let n = s.dim();
        let atoms = s.atom_count();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let neighbours: Vec<Vec<AtomSet>> = (0..n)
            .map(|i| (0..atoms as u32).map(|a| s.cyl(i).image(&AtomSet::singleton(atoms, a))).collect())
            .collect();
        let mut by_pattern = vec![AtomSet::empty(atoms); 1 << pairs.len()];
        for a in 0..atoms as u32 {
            let mask = pairs
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| s.diagonal(i, j).is_some_and(|d| d.contains(a)))
                .fold(0, |m, (p, _)| m | 1 << p);
            by_pattern[mask].insert(a);
        }
        let swaps: Option<Vec<Vec<AtomSet>>> = s.kind().has_transpositions().then(|| {
            pairs
                .iter()
                .map(|&(i, j)| {
                    let r = s.transposition(i, j).expect("transposition slot");
                    (0..atoms as u32).map(|a| r.image(&AtomSet::singleton(atoms, a))).collect()
                })
                .collect()
        });
        let swap_fixed = match &swaps {
            Some(sw) => sw
                .iter()
                .map(|per: &Vec<AtomSet>| AtomSet::from_atoms(atoms, (0..atoms as u32).filter(|&a| per[a as usize].contains(a))))
                .collect(),
            None => vec![AtomSet::full(atoms); pairs.len()],
        };
        let reflexive = AtomSet::from_atoms(atoms, (0..atoms as u32).filter(|&a| (0..n).all(|i| s.cyl(i).related(a, a))));
        Frame {
            structure: s,
            dim: n,
            pairs,
            neighbours,
            by_pattern,
            swaps,
            swap_fixed,
            reflexive,
            words: atoms.div_ceil(64),
            layouts: (0..8).map(|_| std::sync::OnceLock::new()).collect(),
        }
    }

    pub fn atom_count(&self) -> usize {
        self.structure.atom_count()
    }

    pub fn neighbours(&self, i: usize, a: u32) -> &AtomSet {
        &self.neighbours[i][a as usize]
    }

    fn pattern(&self, tuple: &[usize]) -> usize {
        if self.structure.kind().has_diagonals() {
            self.pairs
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| tuple[i] == tuple[j])
                .fold(0, |m, (p, _)| m | 1 << p)
        } else {
            0
        }
    }

    fn allowed(&self, tuple: &[usize]) -> AtomSet {
        if self.structure.kind().has_diagonals() {
            self.by_pattern[self.pattern(tuple)].clone()
        } else {
            AtomSet::full(self.atom_count())
        }
    }

    /// The blank network on `nodes` nodes.
    pub fn blank(&self, nodes: usize) -> Network {
        Network {
            dim: self.dim,
            nodes,
            labels: vec![UNKNOWN; nodes.pow(self.dim as u32)],
        }
    }
}

/// Check every network invariant.
pub fn check_network(frame: &Frame, net: &Network) -> Result<(), NetworkViolation> {
    let n = frame.dim;
    let s = frame.structure;
    if net.dim != n || net.labels.len() != net.nodes.pow(n as u32) {
        return Err(NetworkViolation::Shape);
    }
    for idx in 0..net.labels.len() {
        let t = net.tuple(idx);
        let a = net.labels[idx];
        if a as usize >= frame.atom_count() {
            return Err(NetworkViolation::Unlabelled(t));
        }
        for &(i, j) in &frame.pairs {
            if let Some(d) = s.diagonal(i, j) {
                if d.contains(a) != (t[i] == t[j]) {
                    return Err(NetworkViolation::Diagonal { tuple: t, i, j });
                }
            }
        }
        for i in 0..n {
            let mut u = t.clone();
            for z in 0..net.nodes {
                u[i] = z;
                if !s.cyl(i).related(a, net.label(&u)) {
                    return Err(NetworkViolation::Cylindrifier { tuple: t, i, z });
                }
            }
        }
        if let Some(swaps) = &frame.swaps {
            for (p, &(i, j)) in frame.pairs.iter().enumerate() {
                let mut u = t.clone();
                u.swap(i, j);
                if !swaps[p][a as usize].contains(net.label(&u)) {
                    return Err(NetworkViolation::Transposition { tuple: t, i, j });
                }
            }
        }
    }
    Ok(())
}

/// Tuple bookkeeping for networks on a fixed number of nodes.
struct Layout {
    tuples: Vec<Vec<usize>>,
    /// `(i, idx')` for `idx' = idx[i ↦ z]`, `z ≠ idx_i`.
    links: Vec<Vec<(usize, usize)>>,
    /// `(p, idx ∘ pair p)`.
    swapped: Vec<Vec<(usize, usize)>>,
}

impl Layout {
    fn new(dim: usize, nodes: usize, pairs: &[(usize, usize)]) -> Layout {
        let total = nodes.pow(dim as u32);
        let tuples: Vec<Vec<usize>> = (0..total).map(|idx| tuple_of(dim, nodes, idx)).collect();
        let links = tuples
            .iter()
            .map(|t| {
                let mut out = Vec::new();
                for i in 0..dim {
                    let mut u = t.clone();
                    for z in (0..nodes).filter(|&z| z != t[i]) {
                        u[i] = z;
                        out.push((i, tuple_index(nodes, &u)));
                    }
                }
                out
            })
            .collect();
        let swapped = tuples
            .iter()
            .map(|t| {
                pairs
                    .iter()
                    .enumerate()
                    .map(|(p, &(i, j))| {
                        let mut u = t.clone();
                        u.swap(i, j);
                        (p, tuple_index(nodes, &u))
                    })
                    .collect()
            })
            .collect();
        Layout { tuples, links, swapped }
    }
}

/// Fill the unlabelled tuples of `partial` in every coherent way, feeding
/// each completion to `visit` until it returns `false`. Completions come in
/// a fixed order, smallest atoms first.
pub fn complete_network(frame: &Frame, partial: &Network, visit: &mut dyn FnMut(Network) -> bool) {
    let layout_slot;
    let owned;
    let layout = match frame.layouts.get(partial.nodes) {
        Some(slot) => {
            layout_slot = slot.get_or_init(|| Layout::new(frame.dim, partial.nodes, &frame.pairs));
            layout_slot
        }
        None => {
            owned = Layout::new(frame.dim, partial.nodes, &frame.pairs);
            &owned
        }
    };
    let total = partial.labels.len();
    let w = frame.words;
    let known = |idx: usize| partial.labels[idx] != UNKNOWN;
    // labelled tuples must already agree with each other
    for idx in (0..total).filter(|&idx| known(idx)) {
        let a = partial.labels[idx];
        if !frame.allowed(&layout.tuples[idx]).contains(a) || !frame.reflexive.contains(a) {
            return;
        }
        for &(i, u) in &layout.links[idx] {
            if known(u) && !frame.neighbours[i][a as usize].contains(partial.labels[u]) {
                return;
            }
        }
        if let Some(swaps) = &frame.swaps {
            for &(p, u) in &layout.swapped[idx] {
                if known(u) && !swaps[p][a as usize].contains(partial.labels[u]) {
                    return;
                }
            }
        }
    }

    let mut dom = vec![0u64; total * w];
    let mut open = vec![false; total];
    for idx in (0..total).filter(|&idx| !known(idx)) {
        let mut d = frame.allowed(&layout.tuples[idx]);
        d.intersect_with(&frame.reflexive);
        for &(i, u) in &layout.links[idx] {
            if known(u) {
                d.intersect_with(&frame.neighbours[i][partial.labels[u] as usize]);
            }
        }
        if let Some(swaps) = &frame.swaps {
            for &(p, u) in &layout.swapped[idx] {
                if u == idx {
                    d.intersect_with(&frame.swap_fixed[p]);
                } else if known(u) {
                    d.intersect_with(&swaps[p][partial.labels[u] as usize]);
                }
            }
        }
        if d.is_empty() {
            return;
        }
        dom[idx * w..(idx + 1) * w].copy_from_slice(d.words());
        open[idx] = true;
    }
    let mut search = Search {
        frame,
        layout,
        nodes: partial.nodes,
        labels: partial.labels.clone(),
        dom,
        open,
        trail: Vec::new(),
    };
    search.assign(visit);
}

struct Search<'a, 'f> {
    frame: &'a Frame<'f>,
    layout: &'a Layout,
    nodes: usize,
    labels: Vec<u32>,
    dom: Vec<u64>,
    open: Vec<bool>,
    /// Saved domains: `(idx, words)`, restored in reverse.
    trail: Vec<(usize, Vec<u64>)>,
}

impl Search<'_, '_> {
    fn count(&self, idx: usize) -> u32 {
        let w = self.frame.words;
        self.dom[idx * w..(idx + 1) * w].iter().map(|x| x.count_ones()).sum()
    }

    /// Intersect the domain of `idx` with `with`; `false` if it empties.
    fn narrow(&mut self, idx: usize, with: &AtomSet) -> bool {
        let w = self.frame.words;
        let slot = &mut self.dom[idx * w..(idx + 1) * w];
        if slot.iter().zip(with.words()).all(|(a, b)| a & !b == 0) {
            return true;
        }
        self.trail.push((idx, slot.to_vec()));
        let mut any = 0;
        for (a, b) in slot.iter_mut().zip(with.words()) {
            *a &= b;
            any |= *a;
        }
        any != 0
    }

    fn undo(&mut self, mark: usize) {
        let w = self.frame.words;
        while self.trail.len() > mark {
            let (idx, words) = self.trail.pop().expect("non-empty");
            self.dom[idx * w..(idx + 1) * w].copy_from_slice(&words);
        }
    }

    /// Returns `false` once `visit` asks to stop.
    fn assign(&mut self, visit: &mut dyn FnMut(Network) -> bool) -> bool {
        let pick = (0..self.open.len()).filter(|&idx| self.open[idx]).min_by_key(|&idx| (self.count(idx), idx));
        let Some(idx) = pick else {
            let net = Network {
                dim: self.frame.dim,
                nodes: self.nodes,
                labels: self.labels.clone(),
            };
            debug_assert_eq!(check_network(self.frame, &net), Ok(()));
            return visit(net);
        };
        let w = self.frame.words;
        let mut choices = Vec::new();
        for (k, &word) in self.dom[idx * w..(idx + 1) * w].iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                choices.push((k * 64) as u32 + bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
        self.open[idx] = false;
        let layout = self.layout;
        let frame = self.frame;
        for a in choices {
            let mark = self.trail.len();
            let mut ok = true;
            for &(i, u) in &layout.links[idx] {
                if self.open[u] && !self.narrow(u, &frame.neighbours[i][a as usize]) {
                    ok = false;
                    break;
                }
            }
            if ok {
                if let Some(swaps) = &frame.swaps {
                    for &(p, u) in &layout.swapped[idx] {
                        if self.open[u] && !self.narrow(u, &swaps[p][a as usize]) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if ok {
                self.labels[idx] = a;
                let go_on = self.assign(visit);
                self.labels[idx] = UNKNOWN;
                if !go_on {
                    self.undo(mark);
                    self.open[idx] = true;
                    return false;
                }
            }
            self.undo(mark);
        }
        self.open[idx] = true;
        true
    }
}

/// The networks `∃` may answer with at the start when `∀` picks `atom`:
/// the nodes are the blocks of the atom's diagonal pattern.
pub fn initial_networks(frame: &Frame, atom: u32, visit: &mut dyn FnMut(Network) -> bool) {
    let n = frame.dim;
    let s = frame.structure;
    // restricted growth string of the diagonal pattern
    let mut base = vec![0usize; n];
    let mut blocks = 0;
    for p in 0..n {
        let earlier = (0..p).find(|&q| s.diagonal(q, p).is_some_and(|d| d.contains(atom)));
        base[p] = match earlier {
            Some(q) => base[q],
            None => {
                blocks += 1;
                blocks - 1
            }
        };
    }
    let mut partial = frame.blank(blocks);
    let idx = partial.index(&base);
    partial.labels[idx] = atom;
    complete_network(frame, &partial, visit);
}

/// The coherent answers to the demand `(tuple, i, atom)`: `net` itself if
/// already satisfied, then every extension by one new node labelling
/// `tuple[i ↦ new]` with `atom`. With `reuse = Some(d)`, node `d` is
/// removed first (its number goes to the new node's place at the end).
pub fn legal_extensions(frame: &Frame, net: &Network, tuple: &[usize], i: usize, atom: u32, reuse: Option<usize>) -> Vec<Network> {
    let mut out = Vec::new();
    for_each_extension(frame, net, tuple, i, atom, reuse, &mut |x| {
        out.push(x);
        true
    });
    out
}

pub fn for_each_extension(
    frame: &Frame,
    net: &Network,
    tuple: &[usize],
    i: usize,
    atom: u32,
    reuse: Option<usize>,
    visit: &mut dyn FnMut(Network) -> bool,
) {
    if reuse.is_none() && net.witness(tuple, i, atom).is_some() && !visit(net.clone()) {
        return;
    }
    let mut t = tuple.to_vec();
    let base = match reuse {
        Some(d) => {
            if (0..t.len()).any(|p| p != i && t[p] == d) || d >= net.nodes {
                return;
            }
            for x in &mut t {
                if *x > d {
                    *x -= 1;
                }
            }
            net.without(d)
        }
        None => net.clone(),
    };
    let k = base.nodes + 1;
    let mut partial = frame.blank(k);
    for idx in 0..base.labels.len() {
        let tt = base.tuple(idx);
        let j = partial.index(&tt);
        partial.labels[j] = base.labels[idx];
    }
    t[i] = k - 1;
    let j = partial.index(&t);
    let fits = frame.allowed(&t).contains(atom);
    partial.labels[j] = atom;
    if !fits {
        return;
    }
    let mut u = t.clone();
    for z in 0..base.nodes {
        u[i] = z;
        if !frame.neighbours[i][atom as usize].contains(partial.label(&u)) {
            return;
        }
    }
    complete_network(frame, &partial, visit);
}

/// Canonical key: nodes are split by a profile of the labels around them,
/// then the lexicographically least label vector over orderings within
/// each cell is taken.
pub fn canonical_key(net: &Network) -> Vec<u8> {
    let k = net.nodes;
    let profiles: Vec<Vec<(u32, u32)>> = (0..k)
        .map(|v| {
            let mut prof: Vec<(u32, u32)> = (0..net.labels.len())
                .filter_map(|idx| {
                    let t = net.tuple(idx);
                    let mask = t.iter().enumerate().filter(|(_, &x)| x == v).fold(0u32, |m, (p, _)| m | 1 << p);
                    (mask != 0).then_some((mask, net.labels[idx]))
                })
                .collect();
            prof.sort_unstable();
            prof
        })
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| profiles[a].cmp(&profiles[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(c) if profiles[c[0]] == profiles[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let cell_perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c.len())).collect();
    let mut best: Option<Vec<u32>> = None;
    let mut choice = vec![0usize; cells.len()];
    loop {
        // position[new] = old node
        let mut old_of = Vec::with_capacity(k);
        for (c, cell) in cells.iter().enumerate() {
            for &p in &cell_perms[c][choice[c]] {
                old_of.push(cell[p]);
            }
        }
        let labels: Vec<u32> = (0..net.labels.len())
            .map(|idx| {
                let t: Vec<usize> = tuple_of(net.dim, k, idx).into_iter().map(|x| old_of[x]).collect();
                net.label(&t)
            })
            .collect();
        if best.as_ref().is_none_or(|b| labels < *b) {
            best = Some(labels);
        }
        let mut c = 0;
        loop {
            if c == cells.len() {
                let mut out = vec![k as u8];
                for l in best.expect("at least one ordering") {
                    out.extend_from_slice(&l.to_le_bytes());
                }
                return out;
            }
            choice[c] += 1;
            if choice[c] < cell_perms[c].len() {
                break;
            }
            choice[c] = 0;
            c += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GameKind {
    /// A new node every round, at most `node_budget` in all.
    Gk,
    /// At most `node_budget` nodes; when full, `∀` names a node to reuse.
    Fm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NetworkMove {
    Atom(u32),
    Demand { tuple: Vec<usize>, i: usize, atom: u32, reuse: Option<usize> },
}

pub struct NetworkGame<'a> {
    pub frame: Frame<'a>,
    pub kind: GameKind,
    pub node_budget: usize,
}

impl<'a> NetworkGame<'a> {
    pub fn new(s: &'a CaAtomStructure, kind: GameKind, node_budget: usize) -> Self {
        NetworkGame {
            frame: Frame::new(s),
            kind,
            node_budget,
        }
    }

    /// Unsatisfied demands, one per `(tuple off i, i, atom)`.
    pub fn demands(&self, net: &Network) -> Vec<(Vec<usize>, usize, u32)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for idx in 0..net.labels.len() {
            let t = net.tuple(idx);
            for i in 0..net.dim {
                for a in self.frame.neighbours(i, net.labels[idx]).iter() {
                    let mut key = t.clone();
                    key[i] = usize::MAX;
                    if net.witness(&t, i, a).is_none() && seen.insert((key, i, a)) {
                        out.push((t.clone(), i, a));
                    }
                }
            }
        }
        out
    }
}

impl Game for NetworkGame<'_> {
    type Position = Network;
    type Move = NetworkMove;

    fn forall_moves(&self, pos: Option<&Network>) -> Vec<NetworkMove> {
        let Some(net) = pos else {
            return (0..self.frame.atom_count() as u32).map(NetworkMove::Atom).collect();
        };
        let full = net.nodes >= self.node_budget;
        if full && self.kind == GameKind::Gk {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (tuple, i, atom) in self.demands(net) {
            if full {
                for d in (0..net.nodes).filter(|&d| (0..tuple.len()).all(|p| p == i || tuple[p] != d)) {
                    out.push(NetworkMove::Demand {
                        tuple: tuple.clone(),
                        i,
                        atom,
                        reuse: Some(d),
                    });
                }
            } else {
                out.push(NetworkMove::Demand { tuple, i, atom, reuse: None });
            }
        }
        out
    }

    fn for_each_reply(&self, pos: Option<&Network>, mv: &NetworkMove, visit: &mut dyn FnMut(Network) -> bool) {
        match (pos, mv) {
            (None, NetworkMove::Atom(a)) => initial_networks(&self.frame, *a, visit),
            (Some(net), NetworkMove::Demand { tuple, i, atom, reuse }) => {
                for_each_extension(&self.frame, net, tuple, *i, *atom, *reuse, visit)
            }
            _ => {}
        }
    }

    fn key(&self, pos: &Network) -> Vec<u8> {
        canonical_key(pos)
    }

    fn describe(&self, pos: &Network) -> serde_json::Value {
        serde_json::json!({ "nodes": pos.nodes, "labels": pos.labels })
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::bao::{Kind, Relation, Replacement, Signature};
    use crate::games::solve::{solve, ForallSide, Winner};
    use crate::graphs::Graph;
    use crate::monk::{basic_matrices, build_alpha};

    fn mat3(g: &Graph) -> CaAtomStructure {
        basic_matrices(&build_alpha(g, 3).unwrap(), 3).unwrap().structure
    }

    /// The first network on three distinct nodes, from the `skip`-th atom on.
    pub(crate) fn strict_network(f: &Frame, skip: usize) -> Network {
        (0..f.atom_count() as u32)
            .filter_map(|a| {
                let mut out = None;
                initial_networks(f, a, &mut |n| {
                    out = Some(n);
                    false
                });
                out.filter(|n| n.nodes == 3)
            })
            .nth(skip)
            .unwrap()
    }

    /// One atom lying in every diagonal: the full one-point structure.
    fn one_atom() -> CaAtomStructure {
        let n = 3;
        CaAtomStructure::new(
            Signature { dim: n, kind: Kind::CA },
            1,
            vec![Relation::from_keys(&[0]); n],
            Some(vec![AtomSet::full(1); n * n]),
            Replacement::Absent,
            None,
        )
        .unwrap()
    }

    #[test]
    fn one_atom_structure_never_stalls() {
        let s = one_atom();
        for kind in [GameKind::Gk, GameKind::Fm] {
            let g = NetworkGame::new(&s, kind, 3);
            let r = solve(&g, ForallSide::Search, 4, 10_000).unwrap();
            assert_eq!(r.winner, Winner::Exists);
        }
    }

    #[test]
    fn dead_atom_has_no_extension() {
        // atom 1 is reachable along c_0 but is not R_c1-related to itself
        let n = 3;
        let s = CaAtomStructure::new(
            Signature { dim: n, kind: Kind::Df },
            2,
            vec![
                Relation::from_pairs(2, &[(0, 0), (1, 1), (0, 1), (1, 0)]),
                Relation::from_pairs(2, &[(0, 0)]),
                Relation::from_keys(&[0, 1]),
            ],
            None,
            Replacement::Absent,
            None,
        )
        .unwrap();
        let f = Frame::new(&s);
        let net = Network {
            dim: 3,
            nodes: 1,
            labels: vec![0],
        };
        check_network(&f, &net).unwrap();
        assert!(legal_extensions(&f, &net, &[0, 0, 0], 0, 1, None).is_empty());
    }

    #[test]
    fn satisfied_demand_returns_the_network() {
        let s = mat3(&Graph::complete(2));
        let f = Frame::new(&s);
        let net = strict_network(&f, 0);
        let a = net.label(&[0, 1, 2]);
        let ext = legal_extensions(&f, &net, &[0, 1, 2], 0, a, None);
        assert_eq!(ext[0], net);
        for e in &ext {
            check_network(&f, e).unwrap();
        }
    }

    #[test]
    fn extensions_are_networks_and_realize_the_demand() {
        let s = mat3(&Graph::complete(2));
        let f = Frame::new(&s);
        let g = NetworkGame::new(&s, GameKind::Gk, 4);
        let net = strict_network(&f, 2);
        let demands = g.demands(&net);
        assert!(!demands.is_empty());
        for (t, i, a) in demands.iter().take(40) {
            let ext = legal_extensions(&f, &net, t, *i, *a, None);
            assert!(!ext.is_empty(), "demand {t:?} {i} {a}");
            for e in ext {
                check_network(&f, &e).unwrap();
                let mut u = t.clone();
                u[*i] = e.nodes - 1;
                assert_eq!(e.label(&u), *a);
                assert_eq!(e.induced(&(0..net.nodes).collect::<Vec<_>>()), net);
            }
        }
    }

    #[test]
    fn canonical_key_is_invariant_under_renaming() {
        let s = mat3(&Graph::cycle(5));
        let f = Frame::new(&s);
        let net = &strict_network(&f, 3);
        let ext = legal_extensions(&f, net, &[0, 1, 2], 2, net.label(&[0, 1, 2]), None);
        for e in ext.iter().take(10) {
            let key = canonical_key(e);
            for perm in permutations(e.nodes) {
                assert_eq!(canonical_key(&e.induced(&perm)), key);
            }
        }
    }

    #[test]
    fn mat3_of_an_edge_survives_g2() {
        let s = mat3(&Graph::complete(2));
        let g = NetworkGame::new(&s, GameKind::Gk, 5);
        let r = solve(&g, ForallSide::Search, 2, 2_000_000).unwrap();
        assert_eq!(r.winner, Winner::Exists);
    }

    #[test]
    fn reuse_keeps_the_board_bounded() {
        let s = mat3(&Graph::complete(2));
        let g = NetworkGame::new(&s, GameKind::Fm, 3);
        let net = strict_network(&g.frame, 1);
        let moves = g.forall_moves(Some(&net));
        assert!(moves.iter().all(|m| matches!(m, NetworkMove::Demand { reuse: Some(_), .. })));
        for m in moves.iter().take(20) {
            for r in g.replies(Some(&net), m) {
                assert_eq!(r.nodes, 3);
            }
        }
    }
}
