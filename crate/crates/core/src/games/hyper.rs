use std::collections::BTreeMap;

use serde::Serialize;

use super::network::{check_network, complete_network, for_each_extension, initial_networks, Frame, Network, NetworkViolation};
use super::solve::Game;

/// A network on named nodes `ids` (node `p` of `net` is `ids[p]`) with
/// hyperlabels on short tuples; tuples missing from `hyper` carry `λ_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypernetwork {
    pub ids: Vec<u32>,
    pub net: Network,
    pub hyper: BTreeMap<Vec<u32>, u32>,
}

impl Hypernetwork {
    pub fn new(ids: Vec<u32>, net: Network) -> Hypernetwork {
        assert_eq!(ids.len(), net.nodes);
        Hypernetwork {
            ids,
            net,
            hyper: BTreeMap::new(),
        }
    }

    pub fn position(&self, id: u32) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    /// The atom on a tuple of node ids.
    pub fn label(&self, tuple: &[u32]) -> Option<u32> {
        let t: Option<Vec<usize>> = tuple.iter().map(|&x| self.position(x)).collect();
        t.map(|t| self.net.label(&t))
    }

    pub fn hyperlabel(&self, tuple: &[u32]) -> u32 {
        self.hyper.get(tuple).copied().unwrap_or(0)
    }

    /// Every hyperlabel is `λ_0`.
    pub fn is_neat(&self) -> bool {
        self.hyper.values().all(|&l| l == 0)
    }

    pub fn check(&self, frame: &Frame, lambda: u32) -> Result<(), NetworkViolation> {
        check_network(frame, &self.net)?;
        if self.hyper.iter().any(|(t, &l)| l >= lambda || t.len() == self.net.dim || t.iter().any(|&x| self.position(x).is_none())) {
            return Err(NetworkViolation::Shape);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
pub enum Rejection {
    #[error("the hypernetworks share no node")]
    Disjoint,
    #[error("the hypernetworks disagree on {0:?}")]
    Disagree(Vec<u32>),
}

/// What `∃` must build: a network on `ids` agreeing with both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgDemand {
    pub ids: Vec<u32>,
    pub partial: Network,
    pub hyper: BTreeMap<Vec<u32>, u32>,
}

fn tuples_over(ids: &[u32], dim: usize) -> Vec<Vec<u32>> {
    let k = ids.len();
    (0..k.pow(dim as u32))
        .map(|mut idx| {
            (0..dim)
                .map(|_| {
                    let x = ids[idx % k];
                    idx /= k;
                    x
                })
                .collect()
        })
        .collect()
}

/// `∀` asks for an amalgam of `m1` and `m2`: they must share a node and
/// agree wherever both are defined.
pub fn amalg_moves(frame: &Frame, m1: &Hypernetwork, m2: &Hypernetwork) -> Result<AmalgDemand, Rejection> {
    let overlap: Vec<u32> = m1.ids.iter().copied().filter(|x| m2.ids.contains(x)).collect();
    if overlap.is_empty() {
        return Err(Rejection::Disjoint);
    }
    for t in tuples_over(&overlap, m1.net.dim) {
        if m1.label(&t) != m2.label(&t) {
            return Err(Rejection::Disagree(t));
        }
    }
    let mut hyper = m1.hyper.clone();
    for (t, &l) in &m2.hyper {
        match hyper.get(t) {
            Some(&m) if m != l => return Err(Rejection::Disagree(t.clone())),
            _ => {
                hyper.insert(t.clone(), l);
            }
        }
    }
    let mut ids: Vec<u32> = m1.ids.iter().chain(&m2.ids).copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let mut partial = frame.blank(ids.len());
    for m in [m1, m2] {
        for t in tuples_over(&m.ids, m.net.dim) {
            let pos: Vec<usize> = t.iter().map(|x| ids.binary_search(x).expect("union")).collect();
            let idx = partial.index(&pos);
            partial.labels[idx] = m.label(&t).expect("own tuple");
        }
    }
    Ok(AmalgDemand { ids, partial, hyper })
}

/// Every hypernetwork answering an amalgamation demand.
pub fn amalgamate(frame: &Frame, demand: &AmalgDemand, visit: &mut dyn FnMut(Hypernetwork) -> bool) {
    complete_network(frame, &demand.partial, &mut |net| {
        visit(Hypernetwork {
            ids: demand.ids.clone(),
            net,
            hyper: demand.hyper.clone(),
        })
    });
}

/// `Nθ` for a finite map `theta` from new ids onto the nodes of `n`:
/// `(Nθ)(i_0, …) = N(θ(i_0), …)`. `None` unless `theta` is onto `nodes(N)`.
pub fn transform(n: &Hypernetwork, theta: &BTreeMap<u32, u32>) -> Option<Hypernetwork> {
    let mut image: Vec<u32> = theta.values().copied().collect();
    image.sort_unstable();
    image.dedup();
    let mut own = n.ids.clone();
    own.sort_unstable();
    if image != own {
        return None;
    }
    let ids: Vec<u32> = theta.keys().copied().collect();
    let k = ids.len();
    let dim = n.net.dim;
    let labels = tuples_over(&ids, dim)
        .iter()
        .map(|t| {
            let old: Vec<u32> = t.iter().map(|x| theta[x]).collect();
            n.label(&old).expect("onto")
        })
        .collect();
    let mut hyper = BTreeMap::new();
    for (t, &l) in &n.hyper {
        for new in tuples_over(&ids, t.len()) {
            if new.iter().map(|x| theta[x]).eq(t.iter().copied()) {
                hyper.insert(new, l);
            }
        }
    }
    Some(Hypernetwork {
        ids,
        net: Network { dim, nodes: k, labels },
        hyper,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AmalgMove {
    Atom(u32),
    /// A cylindrifier demand on played hypernetwork `which`, over node ids.
    Demand { which: usize, tuple: Vec<u32>, i: usize, atom: u32 },
    /// Amalgamate two played hypernetworks.
    Amalgamate { left: usize, right: usize },
    /// Copy a played hypernetwork onto fresh ids.
    Transform { which: usize, theta: BTreeMap<u32, u32> },
}

/// A bounded amalgamation game with `|Λ| = 1`: a position is the list of
/// hypernetworks played so far, over at most `node_budget` nodes each.
pub struct AmalgGame<'a> {
    pub frame: Frame<'a>,
    pub node_budget: usize,
}

impl AmalgGame<'_> {
    fn fresh(pos: &[Hypernetwork]) -> u32 {
        pos.iter().flat_map(|h| h.ids.iter()).max().map_or(0, |m| m + 1)
    }
}

impl Game for AmalgGame<'_> {
    type Position = Vec<Hypernetwork>;
    type Move = AmalgMove;

    fn forall_moves(&self, pos: Option<&Vec<Hypernetwork>>) -> Vec<AmalgMove> {
        let Some(played) = pos else {
            return (0..self.frame.atom_count() as u32).map(AmalgMove::Atom).collect();
        };
        let mut out = Vec::new();
        let dim = self.frame.structure.dim();
        for (w, h) in played.iter().enumerate() {
            if h.ids.len() < self.node_budget {
                let mut seen = std::collections::HashSet::new();
                for t in tuples_over(&h.ids, dim) {
                    let a = h.label(&t).expect("own tuple");
                    let pos: Vec<usize> = t.iter().map(|&x| h.position(x).expect("own")).collect();
                    for i in 0..dim {
                        for b in self.frame.neighbours(i, a).iter() {
                            let mut key = t.clone();
                            key[i] = u32::MAX;
                            if h.net.witness(&pos, i, b).is_none() && seen.insert((key, i, b)) {
                                out.push(AmalgMove::Demand { which: w, tuple: t.clone(), i, atom: b });
                            }
                        }
                    }
                }
            }
            let fresh = Self::fresh(played);
            let theta = h.ids.iter().enumerate().map(|(p, &x)| (fresh + p as u32, x)).collect();
            out.push(AmalgMove::Transform { which: w, theta });
        }
        for l in 0..played.len() {
            for r in l + 1..played.len() {
                let (a, b) = (&played[l], &played[r]);
                let mut union: Vec<u32> = a.ids.iter().chain(&b.ids).copied().collect();
                union.sort_unstable();
                union.dedup();
                let nested = union.len() == a.ids.len() || union.len() == b.ids.len();
                if !nested && union.len() <= self.node_budget && amalg_moves(&self.frame, a, b).is_ok() {
                    out.push(AmalgMove::Amalgamate { left: l, right: r });
                }
            }
        }
        out
    }

    fn for_each_reply(&self, pos: Option<&Vec<Hypernetwork>>, mv: &AmalgMove, visit: &mut dyn FnMut(Vec<Hypernetwork>) -> bool) {
        let played = pos.cloned().unwrap_or_default();
        let with = |h: Hypernetwork| {
            let mut next = played.clone();
            next.push(h);
            next
        };
        match mv {
            AmalgMove::Atom(a) if pos.is_none() => initial_networks(&self.frame, *a, &mut |net| {
                let ids = (0..net.nodes as u32).collect();
                visit(with(Hypernetwork::new(ids, net)))
            }),
            AmalgMove::Demand { which, tuple, i, atom } => {
                let Some(h) = played.get(*which) else { return };
                let Some(t) = tuple.iter().map(|&x| h.position(x)).collect::<Option<Vec<usize>>>() else { return };
                let fresh = Self::fresh(&played);
                for_each_extension(&self.frame, &h.net, &t, *i, *atom, None, &mut |net| {
                    let mut ids = h.ids.clone();
                    if net.nodes > ids.len() {
                        ids.push(fresh);
                    }
                    visit(with(Hypernetwork {
                        ids,
                        net,
                        hyper: h.hyper.clone(),
                    }))
                })
            }
            AmalgMove::Amalgamate { left, right } => {
                let (Some(a), Some(b)) = (played.get(*left), played.get(*right)) else { return };
                if let Ok(d) = amalg_moves(&self.frame, a, b) {
                    amalgamate(&self.frame, &d, &mut |h| visit(with(h)));
                }
            }
            AmalgMove::Transform { which, theta } => {
                if let Some(h) = played.get(*which).and_then(|h| transform(h, theta)) {
                    visit(with(h));
                }
            }
            AmalgMove::Atom(_) => {}
        }
    }

    fn key(&self, pos: &Vec<Hypernetwork>) -> Vec<u8> {
        serde_json::to_vec(pos).expect("serializable")
    }

    fn describe(&self, pos: &Vec<Hypernetwork>) -> serde_json::Value {
        serde_json::to_value(pos.last()).expect("serializable")
    }
}
