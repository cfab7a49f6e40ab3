//! Networks and hypernetworks, the atomic games played on them, an exact
//! memoized solver with strategy certificates, and transcript playback.

mod hyper;
mod network;
mod rainbow;
mod solve;

use serde::Serialize;
use thiserror::Error;

pub use hyper::{amalg_moves, amalgamate, transform, AmalgDemand, AmalgGame, AmalgMove, Hypernetwork, Rejection};
pub use network::{
    canonical_key, check_network, complete_network, for_each_extension, initial_networks, legal_extensions, Frame, GameKind, Network,
    NetworkGame, NetworkMove, NetworkViolation,
};
pub use rainbow::{rainbow_key, RainbowGame};
pub use solve::{
    play, solve, verify_certificate, CertKind, CertNode, Certificate, ExistsSide, ExistsScript, ForallScript, ForallSide, Game, SolveResult,
    Solver, Transcript, TranscriptRound, Winner,
};

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
pub enum GameError {
    #[error("state budget exceeded after {states} states")]
    Budget { states: u64 },
    #[error("script inapplicable in round {round}: {message}")]
    Script { round: usize, message: String },
}

pub const DEFAULT_STATE_BUDGET: u64 = 5_000_000;
