use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::game::{ActionId, Agent, GameStructure, ObsId};
use crate::objective::ProductNode;
use crate::parity::Owner;
use crate::tracking::{canonical_form, update_model_detailed};

use super::solve::Outcome;

/// A Moore machine for one player. The initial state already accounts for
/// the observation of the initial game state; after each round the machine
/// reads the player's observation of the new state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyMachine {
    pub player: usize,
    pub initial: usize,
    /// Action played in each machine state.
    pub output: Vec<ActionId>,
    /// `(state, observation) -> state`; missing entries are observations the
    /// strategy never expects.
    pub transitions: BTreeMap<(usize, ObsId), usize>,
    pub labels: Vec<String>,
}

impl StrategyMachine {
    /// One state playing `action` whatever happens.
    pub fn constant(game: &GameStructure, player: usize, action: ActionId) -> Self {
        let observations = game.player(player).observation_names.len();
        StrategyMachine {
            player,
            initial: 0,
            output: vec![action],
            transitions: (0..observations).map(|o| ((0, o), 0)).collect(),
            labels: vec!["const".to_string()],
        }
    }

    pub fn state_count(&self) -> usize {
        self.output.len()
    }

    pub fn next(&self, state: usize, observation: ObsId) -> Option<usize> {
        self.transitions.get(&(state, observation)).copied()
    }

    /// Structural sanity against `game`.
    pub fn check(&self, game: &GameStructure) -> Result<()> {
        if self.player >= game.player_count() {
            return Err(Error::UnknownAgent(self.player));
        }
        let n = self.state_count();
        let actions = game.player(self.player).actions.len();
        let observations = game.player(self.player).observation_names.len();
        if n == 0 || self.initial >= n || self.labels.len() != n {
            return Err(Error::Strategy("machine states are inconsistent".into()));
        }
        if self.output.iter().any(|&a| a >= actions) {
            return Err(Error::Strategy("machine outputs an unknown action".into()));
        }
        if self.transitions.iter().any(|(&(s, o), &t)| s >= n || t >= n || o >= observations) {
            return Err(Error::Strategy("machine transition out of range".into()));
        }
        Ok(())
    }
}

/// Splits the coalition's winning strategy on the product game into one
/// machine per player. A machine state is a coalition node of the product
/// together with the player's class in that node's model.
pub fn distribute_strategy(game: &GameStructure, outcome: &Outcome) -> Result<Vec<StrategyMachine>> {
    if !outcome.coalition_wins {
        return Err(Error::CoalitionLoses);
    }
    (0..game.player_count()).map(|i| machine_for(game, outcome, i)).collect()
}

fn machine_for(game: &GameStructure, outcome: &Outcome, player: usize) -> Result<StrategyMachine> {
    let arena = &outcome.arena;
    let product = &outcome.product;
    let strategy = outcome.solution.strategy(Owner::Coalition);
    let agent = Agent::Player(player);

    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut keys: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let start = (product.game.initial(), 0);
    ids.insert(start, 0);
    keys.push(start);
    queue.push_back(start);
    let mut output = Vec::new();
    let mut transitions = BTreeMap::new();

    while let Some((node, class)) = queue.pop_front() {
        let me = ids[&(node, class)];
        let ProductNode::Model { arena: a, automaton: q } = product.nodes[node] else {
            unreachable!("machine states sit on coalition nodes");
        };
        let choice = *strategy
            .get(&node)
            .ok_or_else(|| Error::Strategy(format!("no strategy at product node {node}")))?;
        let ProductNode::Choice { group, .. } = product.nodes[choice] else {
            unreachable!("coalition nodes lead to choice nodes");
        };
        let model = &arena.node(a).model;
        let chosen = &arena.node(a).groups[group];
        let assignment = &chosen.assignment;
        let world = (0..model.world_count())
            .find(|&w| model.class_of(agent, w) == class)
            .expect("class is inhabited");
        output.push(assignment.profiles[world].action_of(player));

        let update = update_model_detailed(game, model, assignment, arena.components());
        let forms: Vec<_> = update.components.iter().map(canonical_form).collect();
        for (c, &(parent, state)) in update.children.iter().enumerate() {
            if model.class_of(agent, parent) != class {
                continue;
            }
            let (k, local) = update.placement[c];
            let b = chosen.targets[k];
            let next_class = arena.node(b).model.class_of(agent, forms[k].position[local]);
            let colour = arena.node(b).colour.expect("observable arena");
            let q2 = outcome.automaton.step(q, colour);
            let next_node =
                product.node_of(ProductNode::Model { arena: b, automaton: q2 }).expect("product is complete");
            let key = (next_node, next_class);
            let target = *ids.entry(key).or_insert_with(|| {
                keys.push(key);
                queue.push_back(key);
                keys.len() - 1
            });
            let obs = game.observation(player, state);
            if let Some(&previous) = transitions.get(&(me, obs)) {
                if previous != target {
                    return Err(Error::Strategy(format!(
                        "player `{}` cannot determine its next state",
                        game.player(player).name
                    )));
                }
            }
            transitions.insert((me, obs), target);
        }
    }

    let labels = keys
        .iter()
        .map(|&(node, class)| match product.nodes[node] {
            ProductNode::Model { arena: a, automaton: q } => format!("m{a}.q{q}.c{class}"),
            ProductNode::Choice { .. } => unreachable!(),
        })
        .collect();
    Ok(StrategyMachine { player, initial: 0, output, transitions, labels })
}
