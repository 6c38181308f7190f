//! The bundled example games.

use crate::game::{GameBuilder, GameStructure};
use crate::io::{parse_game_file, GameFile};

const SOURCES: [&str; 5] = [
    include_str!("../fixtures/e1.game.json"),
    include_str!("../fixtures/e2.game.json"),
    include_str!("../fixtures/e3.game.json"),
    include_str!("../fixtures/e4.game.json"),
    include_str!("../fixtures/e5.game.json"),
];

/// File contents of E1 to E5.
pub fn sources() -> &'static [&'static str] {
    &SOURCES
}

fn load(index: usize) -> GameStructure {
    parse_game_file(SOURCES[index]).expect("bundled fixtures are valid").game
}

fn builder(index: usize) -> GameBuilder {
    serde_json::from_str::<GameFile>(SOURCES[index]).expect("bundled fixtures parse").to_builder()
}

/// E1 to E5 in order.
pub fn all() -> Vec<GameStructure> {
    (0..SOURCES.len()).map(load).collect()
}

/// One transparent player who can loop or move on.
pub fn e1() -> GameStructure {
    load(0)
}

/// Uncertainty for one round, then back to the start.
pub fn e2() -> GameStructure {
    load(1)
}

/// Uncertainty that never lifts.
pub fn e3() -> GameStructure {
    load(2)
}

/// Player 1 must guess a bit it never learns.
pub fn e4() -> GameStructure {
    load(3)
}

/// Player 2 can signal the bit through its action.
pub fn e5() -> GameStructure {
    load(4)
}

pub fn e1_builder() -> GameBuilder {
    builder(0)
}

pub fn e2_builder() -> GameBuilder {
    builder(1)
}

pub fn e3_builder() -> GameBuilder {
    builder(2)
}

pub fn e4_builder() -> GameBuilder {
    builder(3)
}

pub fn e5_builder() -> GameBuilder {
    builder(4)
}
