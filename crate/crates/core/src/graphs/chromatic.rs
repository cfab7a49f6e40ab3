use serde::{Deserialize, Serialize};

use super::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub chi: usize,
    /// `witness[v]` is the colour of node `v`, in `0..chi`.
    pub witness: Vec<u32>,
}

impl ChromaticResult {
    pub fn classes(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.chi];
        for (v, &c) in self.witness.iter().enumerate() {
            out[c as usize].push(v as u32);
        }
        out
    }
}

struct Bitsets {
    rows: Vec<Vec<u64>>,
}

impl Bitsets {
    fn new(g: &Graph) -> Bitsets {
        let words = g.node_count().div_ceil(64).max(1);
        let mut rows = vec![vec![0u64; words]; g.node_count()];
        for (u, v) in g.edges() {
            rows[u as usize][v as usize / 64] |= 1 << (v % 64);
            rows[v as usize][u as usize / 64] |= 1 << (u % 64);
        }
        Bitsets { rows }
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u][v / 64] >> (v % 64) & 1 == 1
    }
}

/// A large clique found greedily from every start node; its size bounds chi below.
fn greedy_clique(adj: &Bitsets, degree: &[usize]) -> Vec<usize> {
    let n = degree.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree[v]), v));
    let mut best = Vec::new();
    for &start in &order {
        let mut clique = vec![start];
        for &v in &order {
            if v != start && clique.iter().all(|&u| adj.adjacent(u, v)) {
                clique.push(v);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

struct Search {
    adjacency: Vec<Vec<u32>>,
    colour: Vec<Option<u32>>,
    /// `saturation[v]` is a bitmask of colours used by neighbours of `v`.
    saturation: Vec<u64>,
    best: usize,
    best_colouring: Vec<u32>,
    lower: usize,
}

impl Search {
    fn pick(&self) -> Option<usize> {
        let mut pick: Option<(u32, usize, usize)> = None;
        for v in 0..self.colour.len() {
            if self.colour[v].is_some() {
                continue;
            }
            let sat = self.saturation[v].count_ones();
            let free_degree = self.adjacency[v].iter().filter(|&&w| self.colour[w as usize].is_none()).count();
            let better = match pick {
                None => true,
                Some((s, d, _)) => (sat, free_degree) > (s, d),
            };
            if better {
                pick = Some((sat, free_degree, v));
            }
        }
        pick.map(|(_, _, v)| v)
    }

    fn assign(&mut self, v: usize, c: u32) -> Vec<(usize, u64)> {
        self.colour[v] = Some(c);
        let mut undo = Vec::new();
        for &w in &self.adjacency[v] {
            let w = w as usize;
            undo.push((w, self.saturation[w]));
            self.saturation[w] |= 1 << c;
        }
        undo
    }

    fn unassign(&mut self, v: usize, undo: Vec<(usize, u64)>) {
        self.colour[v] = None;
        for (w, s) in undo.into_iter().rev() {
            self.saturation[w] = s;
        }
    }

    fn run(&mut self, used: usize) {
        if used >= self.best || self.best == self.lower {
            return;
        }
        let Some(v) = self.pick() else {
            self.best = used;
            self.best_colouring = self.colour.iter().map(|c| c.expect("coloured")).collect();
            return;
        };
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit as u32 {
            if self.saturation[v] >> c & 1 == 1 {
                continue;
            }
            let undo = self.assign(v, c);
            self.run(used.max(c as usize + 1));
            self.unassign(v, undo);
            if self.best == self.lower {
                return;
            }
        }
    }
}

fn dsatur_greedy(g: &Graph, adjacency: &[Vec<u32>]) -> Vec<u32> {
    let n = g.node_count();
    let mut colour: Vec<Option<u32>> = vec![None; n];
    let mut saturation = vec![0u128; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colour[v].is_none())
            .max_by_key(|&v| (saturation[v].count_ones(), adjacency[v].len(), std::cmp::Reverse(v)))
            .expect("uncoloured node");
        let c = (0..).find(|&c: &u32| saturation[v] >> c & 1 == 0).expect("free colour");
        colour[v] = Some(c);
        for &w in &adjacency[v] {
            saturation[w as usize] |= 1 << c;
        }
    }
    colour.into_iter().map(|c| c.expect("coloured")).collect()
}

/// Exact chromatic number by DSATUR branch and bound, seeded with a greedy
/// clique (lower bound, precoloured) and a greedy colouring (upper bound).
/// Deterministic: ties are broken by node id. Intended for at most 64 nodes.
pub fn chromatic_number(g: &Graph) -> ChromaticResult {
    let n = g.node_count();
    if n == 0 {
        return ChromaticResult { chi: 0, witness: Vec::new() };
    }
    let adjacency = g.adjacency_lists();
    let greedy = dsatur_greedy(g, &adjacency);
    let upper = greedy.iter().max().map_or(0, |&c| c as usize + 1);
    let adj = Bitsets::new(g);
    let degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let clique = greedy_clique(&adj, &degree);
    if clique.len() == upper {
        return ChromaticResult { chi: upper, witness: greedy };
    }
    assert!(upper <= 64, "chromatic_number supports at most 64 colours");
    let mut search = Search {
        adjacency,
        colour: vec![None; n],
        saturation: vec![0; n],
        best: upper,
        best_colouring: greedy,
        lower: clique.len(),
    };
    // any colouring can be permuted so the clique gets colours 0..k
    for (c, &v) in clique.iter().enumerate() {
        search.assign(v, c as u32);
    }
    search.run(clique.len());
    ChromaticResult {
        chi: search.best,
        witness: search.best_colouring,
    }
}
