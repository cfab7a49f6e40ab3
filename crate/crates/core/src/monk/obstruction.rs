use serde::Serialize;

use super::alpha::{RaAtomStructure, IDENTITY};
use crate::bao::AtomSet;

/// A monochromatic element: `1'` alone, or `[Y, s] = {(l, s) : l ∈ Y}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Monochromatic {
    Identity,
    Colour { nodes: Vec<u32>, colour: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub element: Vec<u32>,
    /// `(P ; P) · P`.
    pub product: Vec<u32>,
    pub zero: bool,
    /// Edges of the graph spanned by `Y`.
    pub edges: Vec<(u32, u32)>,
}

/// Evaluate `(P ; P) · P` for a monochromatic element of a Monk structure.
pub fn monochromatic_obstruction(ras: &RaAtomStructure, p: &Monochromatic) -> ObstructionReport {
    let (graph, _) = ras.monk_parameters().expect("structure built from a graph");
    let n = ras.atom_count();
    let (element, edges) = match p {
        Monochromatic::Identity => (AtomSet::singleton(n, IDENTITY), Vec::new()),
        Monochromatic::Colour { nodes, colour } => {
            let set = AtomSet::from_atoms(n, nodes.iter().map(|&v| ras.atom_of(v, *colour)));
            let edges = graph.edges().filter(|(u, v)| nodes.contains(u) && nodes.contains(v)).collect();
            (set, edges)
        }
    };
    let product = ras.compose(&element, &element).intersection(&element);
    ObstructionReport {
        element: element.to_vec(),
        zero: product.is_empty(),
        product: product.to_vec(),
        edges,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub checked: usize,
    /// Elements where `(P ; P) · P = 0` disagrees with `Y` being independent.
    pub violations: Vec<Monochromatic>,
}

/// Every nonempty node set and colour: the product vanishes exactly when the
/// node set is independent. Limited to graphs with at most 16 nodes.
pub fn obstruction_sweep(ras: &RaAtomStructure) -> SweepReport {
    let (graph, colours) = ras.monk_parameters().expect("structure built from a graph");
    let v = graph.node_count();
    assert!(v <= 16, "sweep enumerates every node subset");
    let mut checked = 0;
    let mut violations = Vec::new();
    for mask in 1u32..1 << v {
        let nodes: Vec<u32> = (0..v as u32).filter(|b| mask >> b & 1 == 1).collect();
        for colour in 0..colours {
            let p = Monochromatic::Colour {
                nodes: nodes.clone(),
                colour,
            };
            let r = monochromatic_obstruction(ras, &p);
            checked += 1;
            if r.zero != graph.is_independent(&nodes) {
                violations.push(p);
            }
        }
    }
    SweepReport { checked, violations }
}
