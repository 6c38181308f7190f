use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameStructure, History, LassoPlay, StateId};
use crate::graph;
use crate::objective::{compile_objective, ObjectiveSpec};

use super::machine::StrategyMachine;

/// Why a strategy profile fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// A consistent play that violates the objective.
    Lasso(LassoPlay),
    /// A consistent history after which `player`'s machine has no transition.
    Undefined { history: History, player: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub holds: bool,
    /// Reachable (state, machine states, automaton state) configurations.
    pub configurations: usize,
    pub failure: Option<Failure>,
}

/// One reachable configuration of the verification product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProfileConfig {
    pub state: StateId,
    /// Machine state per player.
    pub memory: Vec<usize>,
    pub automaton: usize,
}

/// Game x machines x condition automaton, explored from the initial
/// configuration. Only nature branches.
#[derive(Clone, Debug)]
pub struct ProfileProduct {
    pub configs: Vec<ProfileConfig>,
    pub successors: Vec<Vec<usize>>,
    pub priorities: Vec<u32>,
    parent: Vec<Option<usize>>,
    /// `(configuration, player, next state)` where a machine had no move;
    /// exploration stops there.
    pub undefined: Option<(usize, usize, StateId)>,
}

fn check_machines(game: &GameStructure, machines: &[StrategyMachine]) -> Result<()> {
    if machines.len() != game.player_count() {
        return Err(Error::Strategy(format!(
            "{} machines for {} players",
            machines.len(),
            game.player_count()
        )));
    }
    for (i, m) in machines.iter().enumerate() {
        if m.player != i {
            return Err(Error::Strategy(format!("machine {i} is for player {}", m.player)));
        }
        m.check(game)?;
    }
    Ok(())
}

pub fn build_profile_product(
    game: &GameStructure,
    objective: &ObjectiveSpec,
    machines: &[StrategyMachine],
) -> Result<ProfileProduct> {
    check_machines(game, machines)?;
    let automaton = compile_objective(objective, game.colour_names())?;
    let start = ProfileConfig {
        state: game.initial(),
        memory: machines.iter().map(|m| m.initial).collect(),
        automaton: automaton.step(automaton.initial, game.colour(game.initial())),
    };
    let mut configs = vec![start.clone()];
    let mut index: HashMap<ProfileConfig, usize> = HashMap::from([(start, 0)]);
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut successors: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::from([0usize]);
    let mut undefined = None;

    'explore: while let Some(c) = queue.pop_front() {
        let config = configs[c].clone();
        let profile = profile_at(machines, &config);
        let mut next = Vec::new();
        for &v in game.successors(config.state, &profile) {
            let mut memory = Vec::with_capacity(machines.len());
            for (i, m) in machines.iter().enumerate() {
                match m.next(config.memory[i], game.observation(i, v)) {
                    Some(s) => memory.push(s),
                    None => {
                        undefined = Some((c, i, v));
                        break 'explore;
                    }
                }
            }
            let target = ProfileConfig {
                state: v,
                memory,
                automaton: automaton.step(config.automaton, game.colour(v)),
            };
            let id = *index.entry(target.clone()).or_insert_with(|| {
                configs.push(target);
                parent.push(Some(c));
                successors.push(Vec::new());
                queue.push_back(configs.len() - 1);
                configs.len() - 1
            });
            next.push(id);
        }
        next.sort_unstable();
        next.dedup();
        successors[c] = next;
    }
    let priorities = configs.iter().map(|c| automaton.priorities[c.automaton]).collect();
    Ok(ProfileProduct { configs, successors, priorities, parent, undefined })
}

/// Checks that every play consistent with `machines` satisfies `objective`,
/// by searching the product of game, machines and automaton for a reachable
/// cycle whose least priority is odd.
pub fn verify_profile(
    game: &GameStructure,
    objective: &ObjectiveSpec,
    machines: &[StrategyMachine],
) -> Result<VerificationReport> {
    let product = build_profile_product(game, objective, machines)?;
    let configurations = product.configs.len();
    if let Some((c, player, v)) = product.undefined {
        let mut history = product.history_to(game, machines, c);
        history.push(profile_at(machines, &product.configs[c]), v);
        return Ok(VerificationReport {
            holds: false,
            configurations,
            failure: Some(Failure::Undefined { history, player }),
        });
    }
    let everything = vec![true; configurations];
    let Some(cycle) =
        graph::cycle_with_least_priority_parity(&product.successors, &everything, &product.priorities, 1)
    else {
        return Ok(VerificationReport { holds: true, configurations, failure: None });
    };
    let prefix = product.history_to(game, machines, cycle[0]);
    let steps = cycle
        .windows(2)
        .map(|w| (profile_at(machines, &product.configs[w[0]]), product.configs[w[1]].state))
        .collect();
    let lasso = LassoPlay::new(prefix, steps).expect("product cycles close");
    Ok(VerificationReport { holds: false, configurations, failure: Some(Failure::Lasso(lasso)) })
}

pub fn profile_at(machines: &[StrategyMachine], config: &ProfileConfig) -> ActionProfile {
    ActionProfile(machines.iter().zip(&config.memory).map(|(m, &s)| m.output[s]).collect())
}

impl ProfileProduct {
    /// The breadth-first-tree history reaching configuration `target`.
    fn history_to(&self, game: &GameStructure, machines: &[StrategyMachine], target: usize) -> History {
        let mut chain = vec![target];
        while let Some(p) = self.parent[*chain.last().unwrap()] {
            chain.push(p);
        }
        chain.reverse();
        let mut history = History::new(game.initial());
        for w in chain.windows(2) {
            history.push(profile_at(machines, &self.configs[w[0]]), self.configs[w[1]].state);
        }
        history
    }
}
