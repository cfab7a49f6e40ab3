//! Finite simple graphs, the generators used by the constructions, and
//! exact chromatic number and girth.

mod chromatic;
mod dimacs;
mod generate;
mod girth;
mod sample;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chromatic::{chromatic_number, ChromaticResult};
pub use dimacs::{parse_dimacs, to_dimacs};
pub use generate::{gen_band, gen_clique_union};
pub use girth::girth;
pub use sample::{sample_high_girth_chromatic, SamplerSchedule};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at node {0}")]
    SelfLoop(u32),
    #[error("edge endpoint {0} outside 0..{1}")]
    OutOfRange(u32, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown graph name {0:?}")]
    UnknownName(String),
    #[error("sampler budget of {0} attempts exhausted")]
    Exhausted(usize),
}

/// An undirected graph without loops on nodes `0..node_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    node_count: usize,
    /// Each edge stored once as `(u, v)` with `u < v`.
    edges: BTreeSet<(u32, u32)>,
}

impl Graph {
    pub fn empty(node_count: usize) -> Graph {
        Graph {
            node_count,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(node_count: usize, edges: &[(u32, u32)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(node_count);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: u32, v: u32) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for x in [u, v] {
            if x as usize >= self.node_count {
                return Err(GraphError::OutOfRange(x, self.node_count));
            }
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn neighbours(&self, v: u32) -> Vec<u32> {
        (0..self.node_count as u32).filter(|&w| self.has_edge(v, w)).collect()
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (u, v) in self.edges() {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    /// An edge with both ends in `nodes`, if any.
    pub fn edge_within(&self, nodes: &[u32]) -> Option<(u32, u32)> {
        for (a, &u) in nodes.iter().enumerate() {
            for &v in &nodes[a + 1..] {
                if self.has_edge(u, v) {
                    return Some((u.min(v), u.max(v)));
                }
            }
        }
        None
    }

    pub fn is_independent(&self, nodes: &[u32]) -> bool {
        self.edge_within(nodes).is_none()
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n as u32 {
            for v in u + 1..n as u32 {
                g.edges.insert((u, v));
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for u in 0..n as u32 {
                let v = (u + 1) % n as u32;
                g.edges.insert((u.min(v), u.max(v)));
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 1..n as u32 {
            g.edges.insert((u - 1, u));
        }
        g
    }

    pub fn petersen() -> Graph {
        let mut g = Graph::empty(10);
        for i in 0..5u32 {
            let _ = g.add_edge(i, (i + 1) % 5);
            let _ = g.add_edge(i, i + 5);
            let _ = g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    /// `K<n>`, `C<n>`, `P<n>`, `E<n>` (edgeless) or `petersen`.
    pub fn named(name: &str) -> Result<Graph, GraphError> {
        let unknown = || GraphError::UnknownName(name.to_string());
        if name.eq_ignore_ascii_case("petersen") {
            return Ok(Graph::petersen());
        }
        let mut chars = name.chars();
        let head = chars.next().ok_or_else(unknown)?;
        let size: usize = chars.as_str().parse().map_err(|_| unknown())?;
        match head.to_ascii_uppercase() {
            'K' => Ok(Graph::complete(size)),
            'C' if size >= 3 => Ok(Graph::cycle(size)),
            'P' => Ok(Graph::path(size)),
            'E' => Ok(Graph::empty(size)),
            _ => Err(unknown()),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.node_count {
            out.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_enforced() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::from_edges(3, &[(0, 3)]), Err(GraphError::OutOfRange(3, 3)));
        let g = Graph::from_edges(3, &[(2, 0), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(0, 2) && g.has_edge(2, 0));
    }

    #[test]
    fn named_graphs() {
        assert_eq!(Graph::named("K4").unwrap().edge_count(), 6);
        assert_eq!(Graph::named("C5").unwrap().edge_count(), 5);
        assert_eq!(Graph::named("petersen").unwrap().edge_count(), 15);
        assert!(Graph::named("Q3").is_err());
        let p = Graph::petersen();
        assert!((0..10).all(|v| p.neighbours(v).len() == 3));
    }
}
