//! Coordination games with imperfect information: recurring certainty,
//! epistemic tracking, and synthesis of distributed observation-based
//! strategies for ω-regular objectives.

pub mod certainty;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod graph;
pub mod io;
pub mod objective;
pub mod parity;
pub mod synthesis;
pub mod tracking;

pub use error::{Error, Result};
pub use game::{
    indistinguishable, observe, validate_structure, ActionProfile, Agent, GameBuilder, GameStructure,
    History, LassoPlay, StateId, Violation,
};
pub use objective::{compile_objective, ObjectiveSpec, ParityAutomaton};
pub use parity::{solve_parity, Owner, ParityGame, ParitySolution};
