//! Monk-style relation-algebra atom structures over a graph, their basic
//! matrices, the direct tuple-type construction and the monochromatic obstruction.

mod alpha;
mod direct;
mod matrices;
mod obstruction;

use thiserror::Error;

pub use alpha::{build_alpha, check_ra_atomstructure, RaAtomStructure, RaError, RaJson, RaReport, IDENTITY};
pub use direct::{build_m, labelled_tuples, DirectStructure, LabelledTuple, DEFAULT_ATOM_BOUND};
pub use matrices::{
    basic_matrices, basic_matrices_from, basic_matrices_unchecked, check_cylindric_basis, enumerate_matrices, is_coherent, pack, transpose, unpack, BasicMatrices,
    BasisReport, WitnessFailure,
};
pub use obstruction::{monochromatic_obstruction, obstruction_sweep, Monochromatic, ObstructionReport, SweepReport};

use crate::bao::StructureError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MonkError {
    #[error("not a relation algebra atom structure: {0:?}")]
    NotAnAtomStructure(RaReport),
    #[error("matrix dimension {0} unsupported (3 or 4)")]
    Dimension(usize),
    #[error("no coherent matrices")]
    Empty,
    #[error("matrices not closed under swapping coordinates {i} and {j}")]
    NotClosed { i: usize, j: usize },
    #[error("more than {0} atoms")]
    TooManyAtoms(usize),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bao::{iso_check, IsoVerdict};
    use crate::graphs::Graph;

    #[test]
    fn direct_structure_is_isomorphic_to_matrices() {
        for g in [Graph::complete(2), Graph::cycle(5)] {
            let mats = basic_matrices(&build_alpha(&g, 3).unwrap(), 3).unwrap();
            let direct = build_m(&g, 3, DEFAULT_ATOM_BOUND).unwrap();
            let verdict = iso_check(&direct.structure, &mats.structure, 10_000_000);
            assert!(matches!(verdict, IsoVerdict::Isomorphic(_)), "{verdict:?}");
        }
    }

    #[test]
    fn different_graphs_are_not_isomorphic() {
        let a = build_m(&Graph::complete(2), 3, DEFAULT_ATOM_BOUND).unwrap();
        let b = basic_matrices(&build_alpha(&Graph::complete(3), 3).unwrap(), 3).unwrap();
        assert_eq!(iso_check(&a.structure, &b.structure, 1000), IsoVerdict::NotIsomorphic);
    }
}
