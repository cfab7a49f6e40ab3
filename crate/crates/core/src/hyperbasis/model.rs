use std::collections::{HashMap, HashSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::HyperNet;
use crate::monk::RaAtomStructure;

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum ModelError {
    #[error("only 3-wide hypernetworks on 3 nodes are supported, got m = {m}, n = {n}")]
    Width { m: usize, n: usize },
    #[error("member {0} carries a hyperlabel other than the default")]
    Hyperlabel(usize),
}

/// A finite relativized model over an RA atom structure: nodes `0..len`,
/// with an atom on every pair in the unit. The unit always contains the
/// diagonal, labelled by an identity atom, and is closed under converse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelModel {
    labels: HashMap<(u32, u32), u32>,
    /// `adj[p]` holds `(M(p, w), w)` sorted.
    adj: Vec<Vec<(u32, u32)>>,
}

impl RelModel {
    pub fn new() -> RelModel {
        RelModel::default()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Pairs in the unit, both orientations and the diagonal included.
    pub fn pair_count(&self) -> usize {
        self.labels.len()
    }

    pub fn add_node(&mut self, identity: u32) -> u32 {
        let p = self.adj.len() as u32;
        self.adj.push(vec![(identity, p)]);
        self.labels.insert((p, p), identity);
        p
    }

    fn link(&mut self, p: u32, q: u32, a: u32) {
        let list = &mut self.adj[p as usize];
        if let Err(at) = list.binary_search(&(a, q)) {
            list.insert(at, (a, q));
        }
        self.labels.insert((p, q), a);
    }

    /// Put `a` on `(p, q)` and its converse on `(q, p)`. Returns `false`,
    /// leaving the model unchanged, when the pair already carries another
    /// atom.
    pub fn set_edge(&mut self, ras: &RaAtomStructure, p: u32, q: u32, a: u32) -> bool {
        match self.labels.get(&(p, q)) {
            Some(&old) => old == a,
            None => {
                self.link(p, q, a);
                self.link(q, p, ras.converse(a));
                true
            }
        }
    }

    pub fn label(&self, p: u32, q: u32) -> Option<u32> {
        self.labels.get(&(p, q)).copied()
    }

    /// Every `w` with `M(p, w) = a`.
    pub fn neighbours_labelled(&self, p: u32, a: u32) -> impl Iterator<Item = u32> + '_ {
        let list = &self.adj[p as usize];
        let from = list.partition_point(|&(b, _)| b < a);
        list[from..].iter().take_while(move |&&(b, _)| b == a).map(|&(_, w)| w)
    }

    pub fn neighbours(&self, p: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[p as usize].iter().map(|&(_, w)| w)
    }

    /// `(p, q, M(p, q))` over the unit, sorted.
    pub fn pairs(&self) -> Vec<(u32, u32, u32)> {
        let mut out: Vec<(u32, u32, u32)> = self.labels.iter().map(|(&(p, q), &a)| (p, q, a)).collect();
        out.sort_unstable();
        out
    }
}

impl Serialize for RelModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let edges: Vec<(u32, u32, u32)> = self.pairs().into_iter().filter(|&(p, q, _)| p <= q).collect();
        let mut st = s.serialize_struct("RelModel", 2)?;
        st.serialize_field("nodes", &self.node_count())?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

/// A demand on the pair `(p, q)`: some `w` with `M(w, p) = a` and
/// `M(w, q) = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Defect {
    pub p: u32,
    pub q: u32,
    pub a: u32,
    pub b: u32,
}

/// A set of unmet demands, stored per pair as a bitset over the sorted
/// demand list of the pair's label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DefectSet {
    demands: Vec<Vec<(u32, u32)>>,
    pairs: Vec<(u32, u32, u32)>,
    offsets: Vec<usize>,
    bits: Vec<u64>,
}

impl DefectSet {
    fn collect(demands: Vec<Vec<(u32, u32)>>, pairs: &[(u32, u32, u32)], mut met: impl FnMut(Defect) -> bool) -> DefectSet {
        let mut set = DefectSet {
            demands,
            ..Default::default()
        };
        let mut words = Vec::new();
        for &(p, q, c) in pairs {
            let list = &set.demands[c as usize];
            words.clear();
            words.resize(list.len().div_ceil(64), 0u64);
            for (t, &(a, b)) in list.iter().enumerate() {
                if !met(Defect { p, q, a, b }) {
                    words[t / 64] |= 1 << (t % 64);
                }
            }
            if words.iter().any(|&w| w != 0) {
                set.pairs.push((p, q, c));
                set.offsets.push(set.bits.len());
                set.bits.extend_from_slice(&words);
            }
        }
        set
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs with at least one unmet demand.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Defect> + '_ {
        self.pairs.iter().enumerate().flat_map(move |(k, &(p, q, c))| {
            let start = self.offsets[k];
            self.demands[c as usize]
                .iter()
                .enumerate()
                .filter(move |&(t, _)| self.bits[start + t / 64] >> (t % 64) & 1 == 1)
                .map(move |(_, &(a, b))| Defect { p, q, a, b })
        })
    }

    pub fn contains(&self, d: &Defect) -> bool {
        let Some(k) = self.pairs.iter().position(|&(p, q, _)| (p, q) == (d.p, d.q)) else { return false };
        let c = self.pairs[k].2 as usize;
        match self.demands[c].binary_search(&(d.a, d.b)) {
            Ok(t) => self.bits[self.offsets[k] + t / 64] >> (t % 64) & 1 == 1,
            Err(_) => false,
        }
    }
}

impl Serialize for DefectSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let sample: Vec<Defect> = self.iter().take(16).collect();
        let mut st = s.serialize_struct("DefectSet", 3)?;
        st.serialize_field("count", &self.count())?;
        st.serialize_field("pairs", &self.pair_count())?;
        st.serialize_field("sample", &sample)?;
        st.end()
    }
}

/// `v : 3 → M` embedding member `member` of the basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub member: usize,
    pub nodes: [u32; 3],
    pub stage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    /// Demands on pairs covered by an embedding at the start of the stage.
    pub defects: usize,
    /// Demands met when their turn came, by the stage-start model or by an
    /// earlier repair in the same stage.
    pub witnessed: usize,
    pub repaired: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelRun {
    pub model: RelModel,
    pub embeddings: Vec<Embedding>,
    pub stages: Vec<StageReport>,
    /// The demands queued in each stage, in processing order.
    #[serde(skip)]
    pub queued: Vec<Vec<Defect>>,
    pub unresolved: DefectSet,
}

/// Demands per label read off the basis: `(N(0, 1), N(0, 2))` for every
/// member with `N(1, 2) = c`.
fn basis_demands(ras: &RaAtomStructure, h: &[HyperNet]) -> Vec<Vec<(u32, u32)>> {
    let mut out = vec![Vec::new(); ras.atom_count()];
    for n in h {
        out[n.atom(1, 2) as usize].push((n.atom(0, 1), n.atom(0, 2)));
    }
    for list in &mut out {
        list.sort_unstable();
        list.dedup();
    }
    out
}

/// Pairs inside the range of some embedding, with the label the embedded
/// member gives them.
fn covered_pairs(h: &[HyperNet], embeddings: &[Embedding]) -> Vec<(u32, u32, u32)> {
    let mut out: Vec<(u32, u32, u32)> = embeddings
        .iter()
        .flat_map(|e| (0..9).map(move |k| (e.nodes[k / 3], e.nodes[k % 3], h[e.member].atom(k / 3, k % 3))))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Search from the `p` side: `w` with `M(p, w) = a˘`, then test `(w, q)`.
fn met_from_p(model: &RelModel, ras: &RaAtomStructure, d: Defect) -> bool {
    model.neighbours_labelled(d.p, ras.converse(d.a)).any(|w| model.label(w, d.q) == Some(d.b))
}

/// Build a partial relativized model step by step.
///
/// Stage 0 is the disjoint union of the strict quotients of the members:
/// nodes joined by an identity atom are merged. Each later stage takes
/// every demand `(p, q, a, b)` with `(p, q)` covered by an embedding and
/// `(a, b, M(p, q))` read off a member, and meets each one still unmet with
/// a fresh node `w`, recording `(member, [w, p, q])` as a new embedding.
/// Hyperlabels are not materialized, so members must use only the default.
pub fn build_model(ras: &RaAtomStructure, h: &[HyperNet], stage_budget: usize) -> Result<ModelRun, ModelError> {
    if let Some(n) = h.iter().find(|n| n.m != 3 || n.n != 3) {
        return Err(ModelError::Width { m: n.m, n: n.n });
    }
    if let Some(k) = h.iter().position(|n| n.hyper.values().any(|&l| l != 0)) {
        return Err(ModelError::Hyperlabel(k));
    }
    let demands = basis_demands(ras, h);
    let mut member_of = HashMap::new();
    for (k, n) in h.iter().enumerate() {
        member_of.entry((n.atom(0, 1), n.atom(0, 2), n.atom(1, 2))).or_insert(k);
    }
    let mut model = RelModel::new();
    let mut embeddings = Vec::new();
    for (k, n) in h.iter().enumerate() {
        let mut v = [0u32; 3];
        for x in 0..3 {
            v[x] = match (0..x).find(|&y| ras.is_identity(n.atom(x, y))) {
                Some(y) => v[y],
                None => model.add_node(n.atom(x, x)),
            };
        }
        for x in 0..3 {
            for y in x + 1..3 {
                if v[x] != v[y] {
                    model.set_edge(ras, v[x], v[y], n.atom(x, y));
                }
            }
        }
        embeddings.push(Embedding {
            member: k,
            nodes: v,
            stage: 0,
        });
    }
    let mut stages = Vec::new();
    let mut queued = Vec::new();
    for stage in 1..=stage_budget {
        let queue: Vec<Defect> = covered_pairs(h, &embeddings)
            .into_iter()
            .flat_map(|(p, q, c)| demands[c as usize].iter().map(move |&(a, b)| Defect { p, q, a, b }))
            .collect();
        let mut report = StageReport {
            stage,
            defects: queue.len(),
            witnessed: 0,
            repaired: 0,
        };
        for &d in &queue {
            if met_from_p(&model, ras, d) {
                report.witnessed += 1;
                continue;
            }
            let c = model.label(d.p, d.q).expect("covered pair is labelled");
            let member = member_of[&(d.a, d.b, c)];
            let w = model.add_node(h[member].atom(0, 0));
            model.set_edge(ras, w, d.p, d.a);
            model.set_edge(ras, w, d.q, d.b);
            embeddings.push(Embedding {
                member,
                nodes: [w, d.p, d.q],
                stage,
            });
            report.repaired += 1;
        }
        stages.push(report);
        queued.push(queue);
    }
    let pairs = covered_pairs(h, &embeddings);
    let unresolved = DefectSet::collect(demands, &pairs, |d| met_from_p(&model, ras, d));
    Ok(ModelRun {
        model,
        embeddings,
        stages,
        queued,
        unresolved,
    })
}

impl ModelRun {
    /// Demands queued in `stage` that the final model does not meet.
    pub fn unmet_from_stage(&self, ras: &RaAtomStructure, stage: usize) -> Vec<Defect> {
        self.queued[stage - 1].iter().copied().filter(|&d| !met_from_p(&self.model, ras, d)).collect()
    }

    /// Every pair carries an atom whose converse sits on the reversed pair,
    /// and an atom is an identity exactly on the diagonal.
    pub fn check_labelling(&self, ras: &RaAtomStructure) -> Option<(u32, u32)> {
        let n = self.model.node_count() as u32;
        if let Some(p) = (0..n).find(|&p| self.model.label(p, p).is_none_or(|a| !ras.is_identity(a))) {
            return Some((p, p));
        }
        self.model.pairs().into_iter().find_map(|(p, q, a)| {
            let ok = (a as usize) < ras.atom_count()
                && self.model.label(q, p) == Some(ras.converse(a))
                && ras.is_identity(a) == (p == q);
            (!ok).then_some((p, q))
        })
    }

    /// The first embedding that does not reproduce its member.
    pub fn check_embeddings(&self, h: &[HyperNet]) -> Option<usize> {
        self.embeddings.iter().position(|e| {
            let n = &h[e.member];
            (0..3).any(|x| (0..3).any(|y| self.model.label(e.nodes[x], e.nodes[y]) != Some(n.atom(x, y))))
        })
    }

    /// Stage 0 holds one component per member, each exactly the range of
    /// its embedding, with nodes merged precisely along identity atoms.
    pub fn check_stage_zero(&self, ras: &RaAtomStructure, h: &[HyperNet]) -> bool {
        let zero: Vec<&Embedding> = self.embeddings.iter().filter(|e| e.stage == 0).collect();
        if zero.len() != h.len() || zero.iter().enumerate().any(|(k, e)| e.member != k) {
            return false;
        }
        let mut owner: HashMap<u32, usize> = HashMap::new();
        for (k, e) in zero.iter().enumerate() {
            let n = &h[e.member];
            for x in 0..3 {
                for y in 0..3 {
                    if (e.nodes[x] == e.nodes[y]) != ras.is_identity(n.atom(x, y)) {
                        return false;
                    }
                }
                if *owner.entry(e.nodes[x]).or_insert(k) != k {
                    return false;
                }
            }
        }
        // no stage-0 node has a neighbour outside its own component
        let first_fresh = owner.len() as u32;
        (0..first_fresh).all(|p| {
            self.model
                .neighbours(p)
                .all(|w| w >= first_fresh || owner.get(&w) == owner.get(&p))
        }) && owner.keys().all(|&p| p < first_fresh)
    }

    /// A clique of at most three nodes outside the range of every
    /// embedding.
    pub fn check_cover(&self) -> Option<Vec<u32>> {
        let mut covered: HashSet<Vec<u32>> = HashSet::new();
        for e in &self.embeddings {
            let v = e.nodes;
            for mask in 1..8u32 {
                let mut set: Vec<u32> = (0..3).filter(|&x| mask >> x & 1 == 1).map(|x| v[x]).collect();
                set.sort_unstable();
                set.dedup();
                covered.insert(set);
            }
        }
        let m = &self.model;
        for p in 0..m.node_count() as u32 {
            if !covered.contains(&vec![p]) {
                return Some(vec![p]);
            }
            for q in m.neighbours(p).filter(|&q| q > p) {
                if !covered.contains(&vec![p, q]) {
                    return Some(vec![p, q]);
                }
                let (small, other) = if m.adj[p as usize].len() <= m.adj[q as usize].len() { (p, q) } else { (q, p) };
                for r in m.neighbours(small).filter(|&r| r > q) {
                    if m.label(other, r).is_some() && !covered.contains(&vec![p, q, r]) {
                        return Some(vec![p, q, r]);
                    }
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub n: usize,
    pub pairs: usize,
    pub demands: u64,
    pub failures: DefectSet,
}

impl SquareReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Demands per label read off the atom structure: `(a, b)` with
/// `c ≤ a˘ ; b`.
fn structure_demands(ras: &RaAtomStructure) -> Vec<Vec<(u32, u32)>> {
    let n = ras.atom_count() as u32;
    (0..n)
        .map(|c| {
            (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| ras.consistent(ras.converse(a), b, c))
                .collect()
        })
        .collect()
}

/// Check that the model is 3-square: every 3-clique `s̄`, every `i < 3` and
/// every consistent triangle agreeing with `s̄` off `i` has a replacement
/// for `s_i` realizing it. On three positions this is a demand on the
/// remaining pair, so the check runs over pairs in the unit.
pub fn check_square(model: &RelModel, ras: &RaAtomStructure, n: usize) -> Result<SquareReport, ModelError> {
    if n != 3 {
        return Err(ModelError::Width { m: 3, n });
    }
    let demands = structure_demands(ras);
    let pairs = model.pairs();
    let total = pairs.iter().map(|&(_, _, c)| demands[c as usize].len() as u64).sum();
    // search from the q side: w with M(q, w) = b˘, then test (w, p)
    let failures = DefectSet::collect(demands, &pairs, |d| {
        model.neighbours_labelled(d.q, ras.converse(d.b)).any(|w| model.label(w, d.p) == Some(d.a))
    });
    Ok(SquareReport {
        n,
        pairs: pairs.len(),
        demands: total,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothReport {
    pub square: SquareReport,
    pub classes: usize,
    /// Pairs over which reflexivity, symmetry and transitivity of `E²` were
    /// checked explicitly.
    pub equivalence_checked: usize,
    pub equivalence_failure: Option<&'static str>,
    /// Two `E²`-related pairs whose one-point extensions differ.
    pub back_and_forth_gap: Option<[(u32, u32); 2]>,
}

impl SmoothReport {
    pub fn pass(&self) -> bool {
        self.square.pass() && self.equivalence_failure.is_none() && self.back_and_forth_gap.is_none()
    }
}

const EQUIVALENCE_SAMPLE: usize = 300;

/// 3-square plus the equivalence system: `ā E² b̄` iff `M(ā*) = M(b̄*)`
/// with `ā* = (a_0, a_1, a_0)`, and `E²`-related pairs must extend to the
/// same set of labelled triangles.
pub fn check_smooth(model: &RelModel, ras: &RaAtomStructure, n: usize) -> Result<SmoothReport, ModelError> {
    let square = check_square(model, ras, n)?;
    let star = |p: u32, q: u32| -> Vec<Option<u32>> {
        let s = [p, q, p];
        (0..9).map(|k| model.label(s[k / 3], s[k % 3])).collect()
    };
    let pairs = model.pairs();
    let keys: Vec<Vec<Option<u32>>> = pairs.iter().map(|&(p, q, _)| star(p, q)).collect();
    let related = |i: usize, j: usize| keys[i] == keys[j];
    let sample = pairs.len().min(EQUIVALENCE_SAMPLE);
    let mut equivalence_failure = None;
    if !(0..pairs.len()).all(|i| related(i, i)) {
        equivalence_failure = Some("reflexive");
    } else if !(0..sample).all(|i| (0..sample).all(|j| related(i, j) == related(j, i))) {
        equivalence_failure = Some("symmetric");
    } else if !(0..sample)
        .all(|i| (0..sample).all(|j| !related(i, j) || (0..sample).all(|k| !related(j, k) || related(i, k))))
    {
        equivalence_failure = Some("transitive");
    }
    let mut classes: HashMap<&Vec<Option<u32>>, (u32, u32, Vec<(u32, u32)>)> = HashMap::new();
    let mut back_and_forth_gap = None;
    for (k, &(p, q, _)) in pairs.iter().enumerate() {
        let mut ext: Vec<(u32, u32)> = model
            .neighbours(p)
            .filter_map(|w| Some((model.label(w, p)?, model.label(w, q)?)))
            .collect();
        ext.sort_unstable();
        ext.dedup();
        match classes.get(&keys[k]) {
            Some((p0, q0, first)) => {
                if back_and_forth_gap.is_none() && *first != ext {
                    back_and_forth_gap = Some([(*p0, *q0), (p, q)]);
                }
            }
            None => {
                classes.insert(&keys[k], (p, q, ext));
            }
        }
    }
    Ok(SmoothReport {
        square,
        classes: classes.len(),
        equivalence_checked: sample,
        equivalence_failure,
        back_and_forth_gap,
    })
}
