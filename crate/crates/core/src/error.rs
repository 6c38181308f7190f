use thiserror::Error;

use crate::game::Violation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game structure: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown agent: player index {0}")]
    UnknownAgent(usize),
    #[error("invalid history: {0}")]
    InvalidHistory(String),
    #[error("observation sequence is unrealisable at index {index}")]
    Unrealisable { index: usize },
    #[error("the game does not have recurring certainty; witness: {witness}")]
    NotRecurring { witness: String },
    #[error("tracking exceeded the node limit: {nodes} nodes discovered, largest model has {largest_model} worlds")]
    NodeLimit { nodes: usize, largest_model: usize },
    #[error(
        "tracking exceeded the world limit: a model with {worlds} worlds was generated after {nodes} nodes"
    )]
    WorldLimit { nodes: usize, worlds: usize },
    #[error("incoherent colours in an epistemic model: {0}")]
    IncoherentColours(String),
    #[error("colouring is not observable: {0}")]
    Observability(String),
    #[error("objective error: {0}")]
    Objective(String),
    #[error("alphabet mismatch: automaton reads {automaton} colours, arena uses {arena}")]
    AlphabetMismatch { automaton: usize, arena: usize },
    #[error("the coalition does not win this game")]
    CoalitionLoses,
    #[error("strategy error: {0}")]
    Strategy(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("format error: {0}")]
    Format(String),
}

fn join_violations(violations: &[Violation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
