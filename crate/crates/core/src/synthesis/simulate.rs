use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certainty::belief_step;
use crate::certainty::{Observer, ObserverMode};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameStructure, History, StateId};

use super::machine::StrategyMachine;

/// A sampled play with the agent-0 belief after each round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationTrace {
    pub play: History,
    pub beliefs: Vec<BTreeSet<StateId>>,
    pub summary: SimulationSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationSummary {
    pub rounds: usize,
    pub certainty_points: usize,
    /// Length of each maximal run of uncertain rounds -> how often it occurred.
    pub gaps: BTreeMap<usize, usize>,
    /// Colour name -> visits.
    pub colours: BTreeMap<String, usize>,
}

/// Plays `steps` rounds with the given machines, nature choosing uniformly
/// among successors with a ChaCha8 generator seeded by `seed`.
pub fn simulate(
    game: &GameStructure,
    machines: &[StrategyMachine],
    steps: usize,
    seed: u64,
) -> Result<SimulationTrace> {
    if machines.len() != game.player_count() {
        return Err(Error::Strategy("one machine per player expected".into()));
    }
    for m in machines {
        m.check(game)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let observer = Observer::new(game, ObserverMode::Agent0);
    let mut memory: Vec<usize> = machines.iter().map(|m| m.initial).collect();
    let mut play = History::new(game.initial());
    let mut beliefs = vec![BTreeSet::from([game.initial()])];

    for round in 0..steps {
        let profile = ActionProfile(machines.iter().zip(&memory).map(|(m, &s)| m.output[s]).collect());
        let next = *game.successors(play.last(), &profile).choose(&mut rng).expect("games are total");
        for (i, m) in machines.iter().enumerate() {
            memory[i] = m.next(memory[i], game.observation(i, next)).ok_or_else(|| {
                Error::Strategy(format!(
                    "machine of player `{}` has no move after round {}",
                    game.player(i).name,
                    round + 1
                ))
            })?;
        }
        let belief = belief_step(game, &observer, beliefs.last().unwrap(), observer.class_of(next));
        beliefs.push(belief);
        play.push(profile, next);
    }

    let mut gaps = BTreeMap::new();
    let mut run = 0;
    for b in &beliefs {
        if b.len() == 1 {
            if run > 0 {
                *gaps.entry(run).or_insert(0) += 1;
            }
            run = 0;
        } else {
            run += 1;
        }
    }
    if run > 0 {
        *gaps.entry(run).or_insert(0) += 1;
    }
    let mut colours = BTreeMap::new();
    for &v in play.states() {
        *colours.entry(game.colour_name(game.colour(v)).to_string()).or_insert(0) += 1;
    }
    let summary = SimulationSummary {
        rounds: steps,
        certainty_points: beliefs.iter().filter(|b| b.len() == 1).count(),
        gaps,
        colours,
    };
    Ok(SimulationTrace { play, beliefs, summary })
}
