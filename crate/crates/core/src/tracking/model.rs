use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::game::{ActionProfile, Agent, ColourId, GameStructure, StateId};

/// A finite Kripke structure over histories: each world records the state
/// its history ends in, and every agent (agent 0 and the players) has an
/// indistinguishability partition of the worlds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpistemicModel {
    states: Vec<StateId>,
    /// `relations[agent slot][world]` is the world's class label, numbered by
    /// first occurrence.
    relations: Vec<Vec<usize>>,
}

fn normalise(labels: &[usize]) -> Vec<usize> {
    let mut ids: HashMap<usize, usize> = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect()
}

impl EpistemicModel {
    /// Builds a model from arbitrary class labels per agent slot.
    pub fn new(states: Vec<StateId>, relations: Vec<Vec<usize>>) -> Self {
        assert!(!states.is_empty(), "epistemic models have at least one world");
        assert!(relations.iter().all(|r| r.len() == states.len()));
        let relations = relations.iter().map(|r| normalise(r)).collect();
        EpistemicModel { states, relations }
    }

    pub fn singleton(state: StateId, player_count: usize) -> Self {
        EpistemicModel { states: vec![state], relations: vec![vec![0]; player_count + 1] }
    }

    pub fn world_count(&self) -> usize {
        self.states.len()
    }

    pub fn agent_slots(&self) -> usize {
        self.relations.len()
    }

    pub fn state_of(&self, world: usize) -> StateId {
        self.states[world]
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn class_of(&self, agent: Agent, world: usize) -> usize {
        self.relations[agent.slot()][world]
    }

    pub fn labels(&self, slot: usize) -> &[usize] {
        &self.relations[slot]
    }

    pub fn class_count(&self, agent: Agent) -> usize {
        self.relations[agent.slot()].iter().max().map_or(0, |m| m + 1)
    }

    /// Worlds of each class of `agent`, classes in label order.
    pub fn classes(&self, agent: Agent) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.class_count(agent)];
        for (w, &c) in self.relations[agent.slot()].iter().enumerate() {
            classes[c].push(w);
        }
        classes
    }

    pub fn related(&self, agent: Agent, w: usize, v: usize) -> bool {
        self.class_of(agent, w) == self.class_of(agent, v)
    }

    /// All worlds share one state.
    pub fn is_certain(&self) -> bool {
        self.states.iter().all(|&s| s == self.states[0])
    }

    /// State multiset, sorted.
    pub fn state_multiset(&self) -> Vec<StateId> {
        let mut s = self.states.clone();
        s.sort_unstable();
        s
    }

    /// Renumbers worlds: world `w` moves to position `position[w]`.
    pub fn relabel(&self, position: &[usize]) -> Self {
        let n = self.world_count();
        let mut states = vec![StateId(0); n];
        let mut relations = vec![vec![0; n]; self.relations.len()];
        for w in 0..n {
            states[position[w]] = self.states[w];
            for (slot, labels) in self.relations.iter().enumerate() {
                relations[slot][position[w]] = labels[w];
            }
        }
        EpistemicModel::new(states, relations)
    }

    /// Connected under the union of the relations of the given slots.
    pub fn is_connected_under(&self, slots: &[usize]) -> bool {
        let n = self.world_count();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(w) = stack.pop() {
            for &slot in slots {
                let label = self.relations[slot][w];
                for (v, s) in seen.iter_mut().enumerate() {
                    if !*s && self.relations[slot][v] == label {
                        *s = true;
                        stack.push(v);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks the structural invariants against `game`.
    pub fn validate(&self, game: &GameStructure) -> Result<(), String> {
        let n = self.world_count();
        if self.relations.len() != game.player_count() + 1 {
            return Err("one partition per agent expected".into());
        }
        if self.states.iter().any(|s| s.0 >= game.state_count()) {
            return Err("world refers to an unknown state".into());
        }
        for i in 0..game.player_count() {
            let player = Agent::Player(i);
            for w in 0..n {
                for v in (w + 1)..n {
                    if !self.related(player, w, v) {
                        continue;
                    }
                    if !self.related(Agent::Zero, w, v) {
                        return Err(format!("player {i} partition does not refine agent 0"));
                    }
                    if game.observation(i, self.states[w]) != game.observation(i, self.states[v]) {
                        return Err(format!("player {i} relates worlds with different observations"));
                    }
                }
            }
        }
        for w in 0..n {
            for v in (w + 1)..n {
                if self.related(Agent::Zero, w, v)
                    && game.agent0().class_of(self.states[w]) != game.agent0().class_of(self.states[v])
                {
                    return Err("agent 0 relates worlds in different classes".into());
                }
            }
        }
        let all: Vec<usize> = (0..self.relations.len()).collect();
        if !self.is_connected_under(&all) {
            return Err("model is not connected".into());
        }
        model_colour(game, self).map(|_| ()).map_err(|e| e.to_string())
    }
}

/// The one-world model at the initial state.
pub fn initial_model(game: &GameStructure) -> EpistemicModel {
    EpistemicModel::singleton(game.initial(), game.player_count())
}

/// The common colour of all worlds.
pub fn model_colour(game: &GameStructure, model: &EpistemicModel) -> Result<ColourId> {
    let colour = game.colour(model.state_of(0));
    match model.states().iter().find(|&&s| game.colour(s) != colour) {
        None => Ok(colour),
        Some(&other) => Err(Error::IncoherentColours(format!(
            "worlds at {} and {} carry colours {} and {}",
            game.state_name(model.state_of(0)),
            game.state_name(other),
            game.colour_name(colour),
            game.colour_name(game.colour(other)),
        ))),
    }
}

/// Replaces a model whose worlds all end in one state by the singleton there.
pub fn certainty_collapse(model: &EpistemicModel) -> EpistemicModel {
    if model.world_count() > 1 && model.is_certain() {
        EpistemicModel::singleton(model.state_of(0), model.agent_slots() - 1)
    } else {
        model.clone()
    }
}

/// An action profile per world, constant per player on that player's classes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleAssignment {
    pub profiles: Vec<ActionProfile>,
}

impl AdmissibleAssignment {
    pub fn is_admissible_for(&self, model: &EpistemicModel) -> bool {
        let n = model.world_count();
        if self.profiles.len() != n {
            return false;
        }
        let players = model.agent_slots() - 1;
        (0..players).all(|i| {
            (0..n).all(|w| {
                (0..n).all(|v| {
                    !model.related(Agent::Player(i), w, v)
                        || self.profiles[w].action_of(i) == self.profiles[v].action_of(i)
                })
            })
        })
    }
}

/// Number of admissible assignments: the product over players of
/// (action count)^(class count).
pub fn assignment_count(game: &GameStructure, model: &EpistemicModel) -> u128 {
    (0..game.player_count())
        .map(|i| (game.player(i).actions.len() as u128).pow(model.class_count(Agent::Player(i)) as u32))
        .product()
}

/// Every admissible assignment, as an odometer over (player, class) choices
/// with the last player's last class varying fastest.
pub fn admissible_assignments(game: &GameStructure, model: &EpistemicModel) -> Vec<AdmissibleAssignment> {
    let digits: Vec<(usize, usize)> = (0..game.player_count())
        .flat_map(|i| (0..model.class_count(Agent::Player(i))).map(move |c| (i, c)))
        .collect();
    let radix: Vec<usize> = digits.iter().map(|&(i, _)| game.player(i).actions.len()).collect();
    let mut choice = vec![0usize; digits.len()];
    let mut offsets = vec![0usize; game.player_count()];
    for i in 1..game.player_count() {
        offsets[i] = offsets[i - 1] + model.class_count(Agent::Player(i - 1));
    }
    let mut out = Vec::new();
    loop {
        let profiles = (0..model.world_count())
            .map(|w| {
                ActionProfile(
                    (0..game.player_count())
                        .map(|i| choice[offsets[i] + model.class_of(Agent::Player(i), w)])
                        .collect(),
                )
            })
            .collect();
        out.push(AdmissibleAssignment { profiles });
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < radix[pos] {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Which relations split successor worlds into separate models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ComponentMode {
    /// Agent 0 and every player.
    #[default]
    AllAgents,
    /// Players only (transitive closure of player relations).
    PlayersOnly,
}

/// The result of one update with full bookkeeping of where each child went.
#[derive(Clone, Debug)]
pub struct Update {
    /// `(parent world, successor state)` per child, ordered by parent then state.
    pub children: Vec<(usize, StateId)>,
    /// `(component, world inside the collapsed component)` per child.
    pub placement: Vec<(usize, usize)>,
    /// Successor models, ordered by their first child, after collapse.
    pub components: Vec<EpistemicModel>,
}

pub fn update_model(
    game: &GameStructure,
    model: &EpistemicModel,
    assignment: &AdmissibleAssignment,
) -> Vec<EpistemicModel> {
    update_model_detailed(game, model, assignment, ComponentMode::AllAgents).components
}

/// Extends every world by every move its assigned profile allows, relates
/// children when their parents are related and the agent cannot tell the new
/// states apart, then splits into connected components and collapses
/// components that are certain.
pub fn update_model_detailed(
    game: &GameStructure,
    model: &EpistemicModel,
    assignment: &AdmissibleAssignment,
    mode: ComponentMode,
) -> Update {
    let mut children = Vec::new();
    for w in 0..model.world_count() {
        for &v in game.successors(model.state_of(w), &assignment.profiles[w]) {
            children.push((w, v));
        }
    }
    let slots = model.agent_slots();
    let labels: Vec<Vec<usize>> = (0..slots)
        .map(|slot| {
            let agent = Agent::from_slot(slot);
            let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
            children
                .iter()
                .map(|&(w, v)| {
                    let obs = game.observation_of(agent, v).expect("agents of the game");
                    let next = ids.len();
                    *ids.entry((model.labels(slot)[w], obs)).or_insert(next)
                })
                .collect()
        })
        .collect();

    // union-find over children sharing a class in a splitting slot
    let m = children.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let first_slot = match mode {
        ComponentMode::AllAgents => 0,
        ComponentMode::PlayersOnly => 1,
    };
    for slot_labels in &labels[first_slot..] {
        let mut first: HashMap<usize, usize> = HashMap::new();
        for (c, &l) in slot_labels.iter().enumerate() {
            if let Some(&rep) = first.get(&l) {
                let (a, b) = (find(&mut parent, rep), find(&mut parent, c));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            } else {
                first.insert(l, c);
            }
        }
    }

    let mut component_of_root: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for c in 0..m {
        let root = find(&mut parent, c);
        let next = members.len();
        let comp = *component_of_root.entry(root).or_insert(next);
        if comp == members.len() {
            members.push(Vec::new());
        }
        members[comp].push(c);
    }

    let mut placement = vec![(0, 0); m];
    let mut components = Vec::with_capacity(members.len());
    for (k, group) in members.iter().enumerate() {
        let states: Vec<StateId> = group.iter().map(|&c| children[c].1).collect();
        let relations: Vec<Vec<usize>> =
            labels.iter().map(|l| group.iter().map(|&c| l[c]).collect()).collect();
        let component = EpistemicModel::new(states, relations);
        debug_assert!(
            component.labels(0).iter().all(|&l| l == 0),
            "every component lies inside one agent-0 class"
        );
        let collapsed = certainty_collapse(&component);
        let certain = collapsed.world_count() == 1;
        for (local, &c) in group.iter().enumerate() {
            placement[c] = (k, if certain { 0 } else { local });
        }
        components.push(collapsed);
    }
    Update { children, placement, components }
}

/// Histogram helper for summaries: distinct states of a model.
pub fn state_support(model: &EpistemicModel) -> BTreeSet<StateId> {
    model.states().iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn st(g: &GameStructure, n: &str) -> StateId {
        g.state_by_name(n).unwrap()
    }

    #[test]
    fn initial_models_are_singletons() {
        for g in [fixtures::e1(), fixtures::e2(), fixtures::e5()] {
            let m = initial_model(&g);
            assert_eq!(m.states(), &[g.initial()]);
            assert_eq!(m.agent_slots(), g.player_count() + 1);
            m.validate(&g).unwrap();
        }
    }

    #[test]
    fn assignment_counts() {
        let e1 = fixtures::e1();
        let a = admissible_assignments(&e1, &initial_model(&e1));
        assert_eq!(a.len(), 2);

        let e5 = fixtures::e5();
        let x =
            EpistemicModel::new(vec![st(&e5, "x1"), st(&e5, "x2")], vec![vec![0, 0], vec![0, 0], vec![0, 1]]);
        x.validate(&e5).unwrap();
        let all = admissible_assignments(&e5, &x);
        assert_eq!(all.len(), 8);
        assert_eq!(assignment_count(&e5, &x), 8);
        assert!(all.iter().all(|f| f.is_admissible_for(&x)));
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), 8);

        // singleton action sets contribute a factor of one
        let e2 = fixtures::e2();
        assert_eq!(assignment_count(&e2, &initial_model(&e2)), 1);
    }

    #[test]
    fn veil_then_reveal() {
        let g = fixtures::e2();
        let f = &admissible_assignments(&g, &initial_model(&g))[0];
        let next = update_model(&g, &initial_model(&g), f);
        assert_eq!(next.len(), 1);
        let u = &next[0];
        assert_eq!(u.states(), &[st(&g, "u1"), st(&g, "u2")]);
        assert!(u.related(Agent::Player(0), 0, 1));
        assert!(!u.related(Agent::Player(1), 0, 1));
        assert!(u.related(Agent::Zero, 0, 1));
        u.validate(&g).unwrap();

        let f = &admissible_assignments(&g, u)[0];
        let back = update_model(&g, u, f);
        assert_eq!(back, vec![EpistemicModel::singleton(g.initial(), 2)]);
    }

    #[test]
    fn mixed_signal_splits_into_singletons() {
        let g = fixtures::e5();
        let x =
            EpistemicModel::new(vec![st(&g, "x1"), st(&g, "x2")], vec![vec![0, 0], vec![0, 0], vec![0, 1]]);
        // player 1 plays a, player 2 plays a at x1 and b at x2
        let f = AdmissibleAssignment { profiles: vec![ActionProfile(vec![0, 0]), ActionProfile(vec![0, 1])] };
        assert!(f.is_admissible_for(&x));
        let next = update_model(&g, &x, &f);
        assert_eq!(
            next,
            vec![EpistemicModel::singleton(st(&g, "m1a"), 2), EpistemicModel::singleton(st(&g, "m2b"), 2)]
        );
    }

    #[test]
    fn collapse_examples() {
        let v = StateId(3);
        let m = EpistemicModel::new(vec![v, v, v], vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]]);
        assert_eq!(certainty_collapse(&m), EpistemicModel::singleton(v, 2));
        let s = EpistemicModel::singleton(v, 2);
        assert_eq!(certainty_collapse(&s), s);
        let two = EpistemicModel::new(vec![StateId(1), StateId(2)], vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(certainty_collapse(&two), two);
    }

    #[test]
    fn model_colours() {
        let g = fixtures::e5();
        assert_eq!(g.colour_name(model_colour(&g, &EpistemicModel::singleton(st(&g, "t"), 2)).unwrap()), "0");
        let e2 = fixtures::e2();
        let u =
            EpistemicModel::new(vec![st(&e2, "u1"), st(&e2, "u2")], vec![vec![0, 0], vec![0, 0], vec![0, 1]]);
        assert_eq!(e2.colour_name(model_colour(&e2, &u).unwrap()), "1");
        let bad =
            EpistemicModel::new(vec![st(&e2, "s0"), st(&e2, "u2")], vec![vec![0, 0], vec![0, 0], vec![0, 1]]);
        assert!(matches!(model_colour(&e2, &bad), Err(Error::IncoherentColours(_))));
    }

    #[test]
    fn players_only_components_can_be_finer() {
        // p,q confused by player 1 only and q,r by player 2 only: after one
        // round from the initial state, worlds at p and r share an agent-0
        // class but no player relates them directly.
        let g = crate::game::GameBuilder::new()
            .states(["s", "p", "q", "r"])
            .player("1", ["a"], [("s", "s"), ("p", "x"), ("q", "x"), ("r", "r")])
            .player("2", ["a"], [("s", "s"), ("p", "p"), ("q", "y"), ("r", "y")])
            .any_move("s", "p")
            .any_move("s", "r")
            .any_move("p", "s")
            .any_move("q", "s")
            .any_move("r", "s")
            .build_validated()
            .unwrap();
        let m = initial_model(&g);
        let f = &admissible_assignments(&g, &m)[0];
        let all = update_model_detailed(&g, &m, f, ComponentMode::AllAgents);
        let players = update_model_detailed(&g, &m, f, ComponentMode::PlayersOnly);
        assert_eq!(all.components.len(), 1);
        assert_eq!(players.components.len(), 2);
    }
}
