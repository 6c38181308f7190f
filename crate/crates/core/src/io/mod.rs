//! JSON game and strategy files, and DOT export.

mod dot;
mod gamefile;
mod strategy_file;

pub use dot::{export_dot, node_lines, DotArtifact, DotKind};
pub use gamefile::{parse_game_file, GameDocument, GameFile, PlayerEntry};
pub use strategy_file::{parse_strategy_file, MachineEntry, StrategyFile};
