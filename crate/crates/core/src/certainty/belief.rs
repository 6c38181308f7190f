use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::game::{observe, Agent, GameStructure, History, ObsId, StateId};

/// Which observer the certainty predicate is about.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ObserverMode {
    /// Agent 0: states are confused along chains of single-player confusions.
    #[default]
    Agent0,
    /// Stricter reading: a guessed history must give every player the same
    /// observations, so states are confused only when no player separates them.
    Joint,
}

/// The state labelling an observer sees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Observer {
    class_of: Vec<usize>,
}

impl Observer {
    pub fn new(game: &GameStructure, mode: ObserverMode) -> Self {
        let class_of = match mode {
            ObserverMode::Agent0 => game.agent0().labelling().to_vec(),
            ObserverMode::Joint => {
                let mut ids: BTreeMap<Vec<ObsId>, usize> = BTreeMap::new();
                game.states()
                    .map(|v| {
                        let key: Vec<ObsId> =
                            (0..game.player_count()).map(|i| game.observation(i, v)).collect();
                        let next = ids.len();
                        *ids.entry(key).or_insert(next)
                    })
                    .collect()
            }
        };
        Observer { class_of }
    }

    pub fn class_of(&self, state: StateId) -> usize {
        self.class_of[state.0]
    }
}

/// One belief update: every state of class `class` reachable in one round
/// from `belief` under any profile.
pub fn belief_step(
    game: &GameStructure,
    observer: &Observer,
    belief: &BTreeSet<StateId>,
    class: usize,
) -> BTreeSet<StateId> {
    belief
        .iter()
        .flat_map(|&u| game.any_successors(u).iter().copied())
        .filter(|&v| observer.class_of(v) == class)
        .collect()
}

/// The agent-0 belief after each prefix of an agent-0 observation sequence.
pub fn belief_run(game: &GameStructure, observations: &[ObsId]) -> Result<Vec<BTreeSet<StateId>>> {
    belief_run_with(game, &Observer::new(game, ObserverMode::Agent0), observations)
}

pub fn belief_run_with(
    game: &GameStructure,
    observer: &Observer,
    observations: &[ObsId],
) -> Result<Vec<BTreeSet<StateId>>> {
    match observations.first() {
        Some(&first) if first == observer.class_of(game.initial()) => {}
        _ => return Err(Error::Unrealisable { index: 0 }),
    }
    let mut run = vec![BTreeSet::from([game.initial()])];
    for (index, &class) in observations.iter().enumerate().skip(1) {
        let next = belief_step(game, observer, run.last().unwrap(), class);
        if next.is_empty() {
            return Err(Error::Unrealisable { index });
        }
        run.push(next);
    }
    Ok(run)
}

/// Whether every agent-0-indistinguishable history of the same length ends
/// where `history` ends.
pub fn attains_certainty(game: &GameStructure, history: &History) -> Result<bool> {
    game.check_history(history)?;
    let observations = observe(game, history, Agent::Zero)?;
    let run = belief_run(game, &observations)?;
    Ok(run.last().is_some_and(|b| b.len() == 1))
}
