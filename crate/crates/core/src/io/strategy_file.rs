use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::GameStructure;
use crate::synthesis::StrategyMachine;

use super::gamefile::syntax;

/// On-disk form of a strategy profile: one machine per player, by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub machines: Vec<MachineEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineEntry {
    pub player: String,
    pub states: Vec<String>,
    pub initial: String,
    /// machine state -> action
    pub output: BTreeMap<String, String>,
    /// machine state -> observation symbol -> machine state
    pub step: BTreeMap<String, BTreeMap<String, String>>,
}

impl StrategyFile {
    pub fn from_machines(game: &GameStructure, machines: &[StrategyMachine]) -> Self {
        let machines = machines
            .iter()
            .map(|m| {
                let player = game.player(m.player);
                let mut step: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
                for (&(s, o), &t) in &m.transitions {
                    step.entry(m.labels[s].clone())
                        .or_default()
                        .insert(player.observation_names[o].clone(), m.labels[t].clone());
                }
                MachineEntry {
                    player: player.name.clone(),
                    states: m.labels.clone(),
                    initial: m.labels[m.initial].clone(),
                    output: m
                        .output
                        .iter()
                        .enumerate()
                        .map(|(s, &a)| (m.labels[s].clone(), player.actions[a].clone()))
                        .collect(),
                    step,
                }
            })
            .collect();
        StrategyFile { machines }
    }

    /// Resolves names against `game`; machines come out in player order.
    pub fn to_machines(&self, game: &GameStructure) -> Result<Vec<StrategyMachine>> {
        let mut by_player: Vec<Option<StrategyMachine>> = vec![None; game.player_count()];
        for entry in &self.machines {
            let player = game
                .player_by_name(&entry.player)
                .ok_or_else(|| Error::Strategy(format!("unknown player `{}`", entry.player)))?;
            if by_player[player].is_some() {
                return Err(Error::Strategy(format!("two machines for player `{}`", entry.player)));
            }
            by_player[player] = Some(entry.resolve(game, player)?);
        }
        by_player
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| Error::Strategy(format!("no machine for player `{}`", game.player(i).name)))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("strategy files serialise")
    }
}

impl MachineEntry {
    fn resolve(&self, game: &GameStructure, player: usize) -> Result<StrategyMachine> {
        let p = game.player(player);
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(Error::Strategy(format!("duplicate machine state `{s}`")));
            }
        }
        let state = |name: &str| {
            index.get(name).copied().ok_or_else(|| Error::Strategy(format!("unknown machine state `{name}`")))
        };
        let mut output = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let action = self
                .output
                .get(s)
                .ok_or_else(|| Error::Strategy(format!("machine state `{s}` has no output")))?;
            output.push(
                p.actions
                    .iter()
                    .position(|a| a == action)
                    .ok_or_else(|| Error::Strategy(format!("unknown action `{action}`")))?,
            );
        }
        if let Some(extra) = self.output.keys().find(|k| !index.contains_key(k.as_str())) {
            return Err(Error::Strategy(format!("unknown machine state `{extra}`")));
        }
        let mut transitions = BTreeMap::new();
        for (from, row) in &self.step {
            let from = state(from)?;
            for (symbol, to) in row {
                let obs = p
                    .observation_names
                    .iter()
                    .position(|o| o == symbol)
                    .ok_or_else(|| Error::Strategy(format!("unknown observation `{symbol}`")))?;
                transitions.insert((from, obs), state(to)?);
            }
        }
        let machine = StrategyMachine {
            player,
            initial: state(&self.initial)?,
            output,
            transitions,
            labels: self.states.clone(),
        };
        machine.check(game)?;
        Ok(machine)
    }
}

pub fn parse_strategy_file(text: &str, game: &GameStructure) -> Result<Vec<StrategyMachine>> {
    let file: StrategyFile = serde_json::from_str(text).map_err(syntax)?;
    file.to_machines(game)
}
