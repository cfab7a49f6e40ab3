//! The atom structure of pairs `(K, ∼)` over a graph, the algebra it
//! carries, its frame laws and the coordinate permutation action.

mod algebra;
mod atom;
mod build;
mod lemma;

use thiserror::Error;

pub use algebra::EtaAlgebra;
pub use atom::{perm_action, EtaAtom, EtaAtomJson, Slot};
pub use build::{build_eta, eta_to_ca, EtaStructure, DEFAULT_ETA_BOUND};
pub use lemma::{check_lemma1, check_lemma2, Lemma2Report, LemmaWitness};

use crate::bao::StructureError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QeaError {
    #[error("dimension {0} unsupported (3 or 4)")]
    Dimension(usize),
    #[error("more than {0} atoms")]
    TooManyAtoms(usize),
    #[error("atom set not closed under a coordinate swap")]
    NotClosed,
    #[error(transparent)]
    Structure(#[from] StructureError),
}
