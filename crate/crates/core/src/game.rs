//! Game structures with imperfect information, histories, observations and
//! the least-informed observer ("agent 0").

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a game state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(pub usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub type ActionId = usize;
pub type ObsId = usize;
pub type ColourId = usize;

/// One action per player, indexed by player position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionProfile(pub Vec<ActionId>);

impl ActionProfile {
    pub fn action_of(&self, player: usize) -> ActionId {
        self.0[player]
    }
}

/// An observer: one of the players, or the fictitious agent 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Agent {
    Zero,
    Player(usize),
}

impl Agent {
    /// Position of the agent in per-agent tables: agent 0 first, then players.
    pub fn slot(self) -> usize {
        match self {
            Agent::Zero => 0,
            Agent::Player(i) => i + 1,
        }
    }

    pub fn from_slot(slot: usize) -> Agent {
        if slot == 0 {
            Agent::Zero
        } else {
            Agent::Player(slot - 1)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Player {
    pub name: String,
    pub actions: Vec<String>,
    /// Observation symbol per state.
    pub observation: Vec<ObsId>,
    pub observation_names: Vec<String>,
}

/// A broken structural invariant, with enough context to locate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    NoPlayers,
    NoStates,
    DuplicateState { state: String },
    DuplicatePlayer { player: String },
    EmptyActionSet { player: String },
    UnknownState { context: String, state: String },
    UnknownAction { player: String, action: String },
    ProfileArity { source: String, expected: usize, found: usize },
    MissingObservation { player: String, state: String },
    MissingColour { state: String },
    Totality { state: String, profile: Vec<String> },
    Observability { player: String, first: String, second: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPlayers => write!(f, "the player list is empty"),
            Violation::NoStates => write!(f, "the state list is empty"),
            Violation::DuplicateState { state } => write!(f, "state `{state}` is declared twice"),
            Violation::DuplicatePlayer { player } => {
                write!(f, "player `{player}` is declared twice")
            }
            Violation::EmptyActionSet { player } => {
                write!(f, "player `{player}` has no actions")
            }
            Violation::UnknownState { context, state } => {
                write!(f, "unknown state `{state}` in {context}")
            }
            Violation::UnknownAction { player, action } => {
                write!(f, "unknown action `{action}` for player `{player}`")
            }
            Violation::ProfileArity { source, expected, found } => {
                write!(f, "move from `{source}` has a profile of {found} actions, expected {expected}")
            }
            Violation::MissingObservation { player, state } => {
                write!(f, "player `{player}` has no observation for state `{state}`")
            }
            Violation::MissingColour { state } => write!(f, "state `{state}` has no colour"),
            Violation::Totality { state, profile } => {
                write!(f, "totality violation at ({state}, ({})): no successor", profile.join(","))
            }
            Violation::Observability { player, first, second } => write!(
                f,
                "observability violation for player {player} at ({first}, {second}): \
                 different colours, same observation"
            ),
        }
    }
}

/// The partition of states seen by agent 0: two states share a class iff
/// they are connected by a chain of single-player confusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agent0Partition {
    class_of: Vec<usize>,
    classes: Vec<Vec<StateId>>,
}

impl Agent0Partition {
    /// Transitive closure of the union of the given state labellings. Each
    /// labelling maps state index to a symbol; states sharing a symbol in any
    /// labelling end up in one class. Classes are numbered by least member.
    pub fn closure(state_count: usize, labellings: &[&[usize]]) -> Self {
        let mut parent: Vec<usize> = (0..state_count).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for labelling in labellings {
            let mut first_with: BTreeMap<usize, usize> = BTreeMap::new();
            for (state, &symbol) in labelling.iter().enumerate() {
                match first_with.get(&symbol) {
                    Some(&rep) => {
                        let (a, b) = (find(&mut parent, rep), find(&mut parent, state));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    None => {
                        first_with.insert(symbol, state);
                    }
                }
            }
        }
        let mut root_class: BTreeMap<usize, usize> = BTreeMap::new();
        let mut class_of = Vec::with_capacity(state_count);
        let mut classes: Vec<Vec<StateId>> = Vec::new();
        for state in 0..state_count {
            let root = find(&mut parent, state);
            let next = root_class.len();
            let class = *root_class.entry(root).or_insert(next);
            if class == classes.len() {
                classes.push(Vec::new());
            }
            classes[class].push(StateId(state));
            class_of.push(class);
        }
        Agent0Partition { class_of, classes }
    }

    pub fn class_of(&self, state: StateId) -> usize {
        self.class_of[state.0]
    }

    pub fn labelling(&self) -> &[usize] {
        &self.class_of
    }

    pub fn classes(&self) -> &[Vec<StateId>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// A finite game structure with imperfect information and a state colouring.
#[derive(Clone, Debug)]
pub struct GameStructure {
    state_names: Vec<String>,
    initial: StateId,
    players: Vec<Player>,
    moves: BTreeSet<(StateId, ActionProfile, StateId)>,
    colour: Vec<ColourId>,
    colour_names: Vec<String>,
    profiles: Vec<ActionProfile>,
    successors: Vec<Vec<Vec<StateId>>>,
    one_step: Vec<Vec<StateId>>,
    partition: Agent0Partition,
}

impl PartialEq for GameStructure {
    fn eq(&self, other: &Self) -> bool {
        self.state_names == other.state_names
            && self.initial == other.initial
            && self.players == other.players
            && self.moves == other.moves
            && self.colour == other.colour
            && self.colour_names == other.colour_names
    }
}

impl GameStructure {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_names.len()).map(StateId)
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.state_names[state.0]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|s| s == name).map(StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn players(&self) -> &[Player] {
        &self.players
    }

    pub fn player(&self, index: usize) -> &Player {
        &self.players[index]
    }

    pub fn player_by_name(&self, name: &str) -> Option<usize> {
        self.players.iter().position(|p| p.name == name)
    }

    pub fn observation(&self, player: usize, state: StateId) -> ObsId {
        self.players[player].observation[state.0]
    }

    /// Observation of `agent` at `state`; agent 0 observes its partition class.
    pub fn observation_of(&self, agent: Agent, state: StateId) -> Result<ObsId> {
        match agent {
            Agent::Zero => Ok(self.partition.class_of(state)),
            Agent::Player(i) if i < self.players.len() => Ok(self.observation(i, state)),
            Agent::Player(i) => Err(Error::UnknownAgent(i)),
        }
    }

    /// Human-readable observation symbol; agent-0 classes print as state sets.
    pub fn observation_name(&self, agent: Agent, obs: ObsId) -> String {
        match agent {
            Agent::Zero => self.state_set_name(&self.partition.classes()[obs]),
            Agent::Player(i) => self.players[i].observation_names[obs].clone(),
        }
    }

    pub fn state_set_name<'a>(&self, states: impl IntoIterator<Item = &'a StateId>) -> String {
        let names: Vec<&str> = states.into_iter().map(|&s| self.state_name(s)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn colour(&self, state: StateId) -> ColourId {
        self.colour[state.0]
    }

    pub fn colour_count(&self) -> usize {
        self.colour_names.len()
    }

    pub fn colour_names(&self) -> &[String] {
        &self.colour_names
    }

    pub fn colour_name(&self, colour: ColourId) -> &str {
        &self.colour_names[colour]
    }

    pub fn colour_by_name(&self, name: &str) -> Option<ColourId> {
        self.colour_names.iter().position(|c| c == name)
    }

    pub fn moves(&self) -> impl Iterator<Item = &(StateId, ActionProfile, StateId)> + '_ {
        self.moves.iter()
    }

    pub fn move_count(&self) -> usize {
        self.moves.len()
    }

    pub fn has_move(&self, from: StateId, profile: &ActionProfile, to: StateId) -> bool {
        self.moves.contains(&(from, profile.clone(), to))
    }

    /// All action profiles in lexicographic order.
    pub fn profiles(&self) -> &[ActionProfile] {
        &self.profiles
    }

    pub fn profile_index(&self, profile: &ActionProfile) -> usize {
        let mut index = 0;
        for (player, &action) in profile.0.iter().enumerate() {
            index = index * self.players[player].actions.len() + action;
        }
        index
    }

    pub fn profile_names(&self, profile: &ActionProfile) -> Vec<String> {
        profile.0.iter().enumerate().map(|(i, &a)| self.players[i].actions[a].clone()).collect()
    }

    pub fn profile_label(&self, profile: &ActionProfile) -> String {
        format!("({})", self.profile_names(profile).join(","))
    }

    /// Sorted successors of `state` under the profile with index `profile`.
    pub fn successors_by_index(&self, state: StateId, profile: usize) -> &[StateId] {
        &self.successors[state.0][profile]
    }

    pub fn successors(&self, state: StateId, profile: &ActionProfile) -> &[StateId] {
        self.successors_by_index(state, self.profile_index(profile))
    }

    /// States reachable from `state` in one round under some profile, sorted.
    pub fn any_successors(&self, state: StateId) -> &[StateId] {
        &self.one_step[state.0]
    }

    pub fn agent0(&self) -> &Agent0Partition {
        &self.partition
    }

    pub fn has_agent(&self, agent: Agent) -> bool {
        match agent {
            Agent::Zero => true,
            Agent::Player(i) => i < self.players.len(),
        }
    }

    /// Checks that `history` starts at the initial state and follows moves.
    pub fn check_history(&self, history: &History) -> Result<()> {
        if history.states.first() != Some(&self.initial) {
            return Err(Error::InvalidHistory("history does not start at the initial state".into()));
        }
        for (k, profile) in history.profiles.iter().enumerate() {
            let (from, to) = (history.states[k], history.states[k + 1]);
            if profile.0.len() != self.players.len()
                || profile.0.iter().enumerate().any(|(i, &a)| a >= self.players[i].actions.len())
                || !self.successors(from, profile).contains(&to)
            {
                return Err(Error::InvalidHistory(format!(
                    "no move {} -{:?}-> {} at round {k}",
                    self.state_name(from),
                    profile.0,
                    self.state_name(to)
                )));
            }
        }
        Ok(())
    }

    fn from_parts(
        state_names: Vec<String>,
        initial: StateId,
        players: Vec<Player>,
        moves: BTreeSet<(StateId, ActionProfile, StateId)>,
        colour: Vec<ColourId>,
        colour_names: Vec<String>,
    ) -> Self {
        let mut profiles = vec![ActionProfile(Vec::new())];
        for player in &players {
            profiles = profiles
                .into_iter()
                .flat_map(|p| {
                    (0..player.actions.len()).map(move |a| {
                        let mut next = p.0.clone();
                        next.push(a);
                        ActionProfile(next)
                    })
                })
                .collect();
        }
        let labellings: Vec<&[usize]> = players.iter().map(|p| p.observation.as_slice()).collect();
        let partition = Agent0Partition::closure(state_names.len(), &labellings);
        let mut game = GameStructure {
            successors: vec![vec![Vec::new(); profiles.len()]; state_names.len()],
            one_step: vec![Vec::new(); state_names.len()],
            state_names,
            initial,
            players,
            moves,
            colour,
            colour_names,
            profiles,
            partition,
        };
        for (from, profile, to) in &game.moves {
            let index = game.profile_index(profile);
            game.successors[from.0][index].push(*to);
            game.one_step[from.0].push(*to);
        }
        for targets in &mut game.one_step {
            targets.sort_unstable();
            targets.dedup();
        }
        // moves is ordered by (from, profile, to), so successor lists are sorted
        game
    }
}

/// Every violated invariant of `game` that survives indexing: totality of the
/// move relation and observability of the colouring.
pub fn validate_structure(game: &GameStructure) -> Vec<Violation> {
    let mut violations = Vec::new();
    for state in game.states() {
        for (index, profile) in game.profiles().iter().enumerate() {
            if game.successors_by_index(state, index).is_empty() {
                violations.push(Violation::Totality {
                    state: game.state_name(state).to_string(),
                    profile: game.profile_names(profile),
                });
            }
        }
    }
    violations.extend(observability_violations(game).into_iter().map(|(player, v, w)| {
        Violation::Observability {
            player: game.player(player).name.clone(),
            first: game.state_name(v).to_string(),
            second: game.state_name(w).to_string(),
        }
    }));
    violations
}

/// Pairs `(player, v, w)` with `v < w` where the player confuses states of
/// different colours.
pub fn observability_violations(game: &GameStructure) -> Vec<(usize, StateId, StateId)> {
    let mut out = Vec::new();
    for player in 0..game.player_count() {
        for v in game.states() {
            for w in game.states().filter(|w| *w > v) {
                if game.colour(v) != game.colour(w)
                    && game.observation(player, v) == game.observation(player, w)
                {
                    out.push((player, v, w));
                }
            }
        }
    }
    out
}

pub fn agent0_partition(game: &GameStructure) -> Agent0Partition {
    game.partition.clone()
}

/// A finite play prefix `v0, a0, v1, ..., vl`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct History {
    states: Vec<StateId>,
    profiles: Vec<ActionProfile>,
}

impl History {
    pub fn new(initial: StateId) -> Self {
        History { states: vec![initial], profiles: Vec::new() }
    }

    pub fn from_parts(states: Vec<StateId>, profiles: Vec<ActionProfile>) -> Result<Self> {
        if states.len() != profiles.len() + 1 {
            return Err(Error::InvalidHistory(format!(
                "{} states do not alternate with {} profiles",
                states.len(),
                profiles.len()
            )));
        }
        Ok(History { states, profiles })
    }

    pub fn push(&mut self, profile: ActionProfile, state: StateId) {
        self.profiles.push(profile);
        self.states.push(state);
    }

    pub fn extended(&self, profile: ActionProfile, state: StateId) -> Self {
        let mut next = self.clone();
        next.push(profile, state);
        next
    }

    /// Number of rounds played.
    pub fn rounds(&self) -> usize {
        self.profiles.len()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn profiles(&self) -> &[ActionProfile] {
        &self.profiles
    }

    pub fn last(&self) -> StateId {
        *self.states.last().expect("histories are nonempty")
    }

    pub fn prefix(&self, rounds: usize) -> History {
        History { states: self.states[..=rounds].to_vec(), profiles: self.profiles[..rounds].to_vec() }
    }

    pub fn render(&self, game: &GameStructure) -> String {
        let mut out = game.state_name(self.states[0]).to_string();
        for (profile, state) in self.profiles.iter().zip(&self.states[1..]) {
            out.push_str(&format!(" {} {}", game.profile_label(profile), game.state_name(*state)));
        }
        out
    }
}

/// An ultimately periodic play `prefix . cycle^omega`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LassoPlay {
    pub prefix: History,
    /// Steps of the cycle, starting from the prefix's last state and ending there.
    pub cycle: Vec<(ActionProfile, StateId)>,
}

impl LassoPlay {
    pub fn new(prefix: History, cycle: Vec<(ActionProfile, StateId)>) -> Result<Self> {
        match cycle.last() {
            Some((_, end)) if *end == prefix.last() => Ok(LassoPlay { prefix, cycle }),
            _ => Err(Error::InvalidHistory("lasso cycle must be nonempty and closed".into())),
        }
    }

    /// The history obtained by following the prefix and then `rounds` cycle steps.
    pub fn unroll(&self, rounds: usize) -> History {
        let mut h = self.prefix.clone();
        for (profile, state) in self.cycle.iter().cycle().take(rounds) {
            h.push(profile.clone(), *state);
        }
        h
    }

    pub fn check(&self, game: &GameStructure) -> Result<()> {
        game.check_history(&self.unroll(self.cycle.len()))
    }
}

/// The observation sequence of `history` for `agent`.
pub fn observe(game: &GameStructure, history: &History, agent: Agent) -> Result<Vec<ObsId>> {
    history.states.iter().map(|&s| game.observation_of(agent, s)).collect()
}

/// Whether `agent` cannot tell `first` from `second`. Players also compare
/// their own actions; agent 0 has no actions of its own.
pub fn indistinguishable(
    game: &GameStructure,
    first: &History,
    second: &History,
    agent: Agent,
) -> Result<bool> {
    if !game.has_agent(agent) {
        return Err(match agent {
            Agent::Player(i) => Error::UnknownAgent(i),
            Agent::Zero => unreachable!(),
        });
    }
    if first.rounds() != second.rounds() {
        return Ok(false);
    }
    if observe(game, first, agent)? != observe(game, second, agent)? {
        return Ok(false);
    }
    Ok(match agent {
        Agent::Zero => true,
        Agent::Player(i) => {
            first.profiles.iter().zip(&second.profiles).all(|(a, b)| a.action_of(i) == b.action_of(i))
        }
    })
}

/// Name-based construction of a [`GameStructure`]. A profile entry `"*"`
/// stands for every action of that player.
#[derive(Clone, Debug, Default)]
pub struct GameBuilder {
    states: Vec<String>,
    initial: Option<String>,
    players: Vec<(String, Vec<String>, BTreeMap<String, String>)>,
    moves: Vec<(String, Vec<String>, String)>,
    colours: BTreeMap<String, String>,
}

impl GameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn state(mut self, name: &str) -> Self {
        self.states.push(name.to_string());
        self
    }

    pub fn states<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.states.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = Some(name.to_string());
        self
    }

    /// Adds a player with its actions and an observation symbol per state.
    pub fn player<A, O, S, T>(mut self, name: &str, actions: A, observations: O) -> Self
    where
        A: IntoIterator<Item = S>,
        O: IntoIterator<Item = (T, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        self.players.push((
            name.to_string(),
            actions.into_iter().map(Into::into).collect(),
            observations.into_iter().map(|(s, o)| (s.into(), o.into())).collect(),
        ));
        self
    }

    /// Adds a player who tells every state apart.
    pub fn transparent_player<A, S>(self, name: &str, actions: A) -> Self
    where
        A: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let obs: Vec<(String, String)> = self.states.iter().map(|s| (s.clone(), s.clone())).collect();
        self.player(name, actions, obs)
    }

    pub fn moves<P, S>(mut self, from: &str, profile: P, to: &str) -> Self
    where
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.moves.push((from.to_string(), profile.into_iter().map(Into::into).collect(), to.to_string()));
        self
    }

    /// Adds a move for every profile (all-wildcard).
    pub fn any_move(self, from: &str, to: &str) -> Self {
        let arity = self.players.len();
        self.moves(from, vec!["*"; arity], to)
    }

    pub fn colour(mut self, state: &str, colour: &str) -> Self {
        self.colours.insert(state.to_string(), colour.to_string());
        self
    }

    /// Resolves names into an indexed structure. Fails on anything that
    /// prevents indexing; totality and observability are left to
    /// [`validate_structure`].
    pub fn build(&self) -> Result<GameStructure> {
        let mut violations = Vec::new();
        if self.players.is_empty() {
            violations.push(Violation::NoPlayers);
        }
        if self.states.is_empty() {
            violations.push(Violation::NoStates);
        }
        let mut state_index: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if state_index.insert(s.as_str(), i).is_some() {
                violations.push(Violation::DuplicateState { state: s.clone() });
            }
        }
        let lookup = |context: &str, name: &str, violations: &mut Vec<Violation>| {
            let found = state_index.get(name).copied().map(StateId);
            if found.is_none() {
                violations
                    .push(Violation::UnknownState { context: context.to_string(), state: name.to_string() });
            }
            found
        };
        let initial = match &self.initial {
            Some(name) => lookup("initial", name, &mut violations),
            None => self.states.first().map(|_| StateId(0)),
        };

        let mut players = Vec::new();
        let mut seen_players = BTreeSet::new();
        for (name, actions, observations) in &self.players {
            if !seen_players.insert(name.as_str()) {
                violations.push(Violation::DuplicatePlayer { player: name.clone() });
            }
            if actions.is_empty() {
                violations.push(Violation::EmptyActionSet { player: name.clone() });
            }
            for state in observations.keys() {
                lookup(&format!("observations of player `{name}`"), state, &mut violations);
            }
            let mut symbol_ids: BTreeMap<&str, usize> = BTreeMap::new();
            let mut observation_names = Vec::new();
            let mut observation = Vec::new();
            for state in &self.states {
                match observations.get(state) {
                    Some(symbol) => {
                        let next = symbol_ids.len();
                        let id = *symbol_ids.entry(symbol.as_str()).or_insert_with(|| {
                            observation_names.push(symbol.clone());
                            next
                        });
                        observation.push(id);
                    }
                    None => {
                        violations.push(Violation::MissingObservation {
                            player: name.clone(),
                            state: state.clone(),
                        });
                        observation.push(usize::MAX);
                    }
                }
            }
            players.push(Player {
                name: name.clone(),
                actions: actions.clone(),
                observation,
                observation_names,
            });
        }

        let mut moves = BTreeSet::new();
        for (from, profile, to) in &self.moves {
            let src = lookup("move source", from, &mut violations);
            let dst = lookup(&format!("move target from `{from}`"), to, &mut violations);
            if profile.len() != players.len() {
                violations.push(Violation::ProfileArity {
                    source: from.clone(),
                    expected: players.len(),
                    found: profile.len(),
                });
                continue;
            }
            let mut choices: Vec<Vec<ActionId>> = Vec::new();
            for (player, action) in players.iter().zip(profile) {
                if action == "*" {
                    choices.push((0..player.actions.len()).collect());
                } else if let Some(a) = player.actions.iter().position(|x| x == action) {
                    choices.push(vec![a]);
                } else {
                    violations.push(Violation::UnknownAction {
                        player: player.name.clone(),
                        action: action.clone(),
                    });
                    choices.push(Vec::new());
                }
            }
            let (Some(src), Some(dst)) = (src, dst) else { continue };
            let mut expanded = vec![Vec::new()];
            for options in &choices {
                expanded = expanded
                    .into_iter()
                    .flat_map(|p: Vec<ActionId>| {
                        options.iter().map(move |&a| {
                            let mut next = p.clone();
                            next.push(a);
                            next
                        })
                    })
                    .collect();
            }
            for profile in expanded {
                moves.insert((src, ActionProfile(profile), dst));
            }
        }

        for state in self.colours.keys() {
            lookup("colours", state, &mut violations);
        }
        let mut colour_ids: BTreeMap<&str, usize> = BTreeMap::new();
        let mut colour_names: Vec<String> = Vec::new();
        let mut colour = Vec::new();
        for state in &self.states {
            match self.colours.get(state) {
                Some(c) => {
                    let next = colour_ids.len();
                    let id = *colour_ids.entry(c.as_str()).or_insert_with(|| {
                        colour_names.push(c.clone());
                        next
                    });
                    colour.push(id);
                }
                None if self.colours.is_empty() => {
                    // uncoloured games get a single constant colour
                    if colour_names.is_empty() {
                        colour_names.push("_".to_string());
                    }
                    colour.push(0);
                }
                None => {
                    violations.push(Violation::MissingColour { state: state.clone() });
                    colour.push(0);
                }
            }
        }

        if !violations.is_empty() {
            return Err(Error::Invalid(violations));
        }
        Ok(GameStructure::from_parts(
            self.states.clone(),
            initial.expect("checked above"),
            players,
            moves,
            colour,
            colour_names,
        ))
    }

    /// [`build`](Self::build) followed by [`validate_structure`].
    pub fn build_validated(&self) -> Result<GameStructure> {
        let game = self.build()?;
        let violations = validate_structure(&game);
        if violations.is_empty() {
            Ok(game)
        } else {
            Err(Error::Invalid(violations))
        }
    }
}

/// All histories of exactly `rounds` rounds, in lexicographic order of
/// (profile index, successor) choices.
pub fn histories_of_length(game: &GameStructure, rounds: usize) -> Vec<History> {
    let mut layer = vec![History::new(game.initial())];
    for _ in 0..rounds {
        let mut next = Vec::new();
        for h in &layer {
            for (index, profile) in game.profiles().iter().enumerate() {
                for &to in game.successors_by_index(h.last(), index) {
                    next.push(h.extended(profile.clone(), to));
                }
            }
        }
        layer = next;
    }
    layer
}
