use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{GameBuilder, GameStructure};
use crate::objective::ObjectiveSpec;

/// On-disk form of a game: everything by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub states: Vec<String>,
    pub initial: String,
    pub players: Vec<PlayerEntry>,
    /// `[source, [action per player or "*"], target]`
    pub moves: Vec<(String, Vec<String>, String)>,
    #[serde(default)]
    pub colours: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerEntry {
    pub name: String,
    pub actions: Vec<String>,
    pub observations: BTreeMap<String, String>,
}

/// A parsed and validated game with its optional metadata.
#[derive(Clone, Debug)]
pub struct GameDocument {
    pub name: Option<String>,
    pub game: GameStructure,
    pub objective: Option<ObjectiveSpec>,
}

impl GameFile {
    pub fn to_builder(&self) -> GameBuilder {
        let mut b = GameBuilder::new().states(self.states.iter().cloned()).initial(&self.initial);
        for p in &self.players {
            b = b.player(&p.name, p.actions.iter().cloned(), p.observations.clone());
        }
        for (from, profile, to) in &self.moves {
            b = b.moves(from, profile.iter().cloned(), to);
        }
        for (state, colour) in &self.colours {
            b = b.colour(state, colour);
        }
        b
    }

    /// Writes `game` out with one move per concrete profile.
    pub fn from_game(game: &GameStructure, name: Option<String>, objective: Option<ObjectiveSpec>) -> Self {
        let states: Vec<String> = game.states().map(|v| game.state_name(v).to_string()).collect();
        let players = game
            .players()
            .iter()
            .map(|p| PlayerEntry {
                name: p.name.clone(),
                actions: p.actions.clone(),
                observations: game
                    .states()
                    .map(|v| {
                        (game.state_name(v).to_string(), p.observation_names[p.observation[v.0]].clone())
                    })
                    .collect(),
            })
            .collect();
        let moves = game
            .moves()
            .map(|(from, profile, to)| {
                (
                    game.state_name(*from).to_string(),
                    game.profile_names(profile),
                    game.state_name(*to).to_string(),
                )
            })
            .collect();
        let colours = game
            .states()
            .map(|v| (game.state_name(v).to_string(), game.colour_name(game.colour(v)).to_string()))
            .collect();
        GameFile {
            name,
            states,
            initial: game.state_name(game.initial()).to_string(),
            players,
            moves,
            colours,
            objective,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game files serialise")
    }
}

pub(crate) fn syntax(e: serde_json::Error) -> Error {
    Error::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Parses and validates a game file (totality and observability included).
pub fn parse_game_file(text: &str) -> Result<GameDocument> {
    let file: GameFile = serde_json::from_str(text).map_err(syntax)?;
    let game = file.to_builder().build_validated()?;
    Ok(GameDocument { name: file.name, game, objective: file.objective })
}
