//! Rainbow palettes, coloured graphs and the atom structures they form,
//! the consistency tables, `∃`'s colour completion and `∀`'s attacks.

mod complete;
mod enumerate;
mod graph;
mod palette;
mod scripts;

use thiserror::Error;

pub use complete::{all_completions, check_monk, complete_colouring, complete_monk, monk_triangle_ok, CompletionError, MonkGraph, MonkLabel};
pub use enumerate::{count_atoms, enumerate_atoms, RainbowAtom, RainbowStructure, DEFAULT_RAINBOW_BOUND};
pub use graph::{check_consistency, check_yellows, mask_list, subsets, triangle_allowed, ColouredGraph, Violation};
pub use palette::{Colour, Palette, Preset, RedRule, Table, TintWhite};
pub use scripts::{apply_move, forall_cone_pigeonhole, forall_red_descent, RainbowMove, ScriptError};

use crate::bao::StructureError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RainbowError {
    #[error("invalid preset: {0}")]
    InvalidPreset(String),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
    #[error("more than {0} atoms")]
    TooManyAtoms(usize),
    #[error("atom set not closed under a coordinate swap")]
    NotClosed,
    #[error(transparent)]
    Structure(#[from] StructureError),
}
