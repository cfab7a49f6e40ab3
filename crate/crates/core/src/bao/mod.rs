//! Finite atom structures for the diagonal-free, substitution, cylindric,
//! polyadic and polyadic-equality signatures, and their complex algebras.

pub mod atomset;
pub mod axioms;
pub mod closure;
pub mod completion;
pub mod iso;
pub mod json;
pub mod relation;
pub mod simple;
pub mod structure;
pub mod symmetric;
pub mod term;

pub use atomset::AtomSet;
pub use axioms::{check_axioms, replay, AxiomReport, Mode, Status, System};
pub use closure::{term_closure, Closure};
pub use completion::{completion_embed_check, EmbedVerdict, FiniteBao, TableBao};
pub use iso::{iso_check, IsoVerdict};
pub use relation::Relation;
pub use simple::{is_simple, SimpleVerdict};
pub use structure::{CaAtomStructure, Kind, Op, Replacement, Signature, StructureError};
pub use symmetric::{symmetric_group_repr, SubstitutionAlgebra};
