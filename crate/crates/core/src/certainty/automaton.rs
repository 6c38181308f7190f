use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use super::belief::{belief_step, Observer, ObserverMode};
use crate::game::{GameStructure, History, StateId};

/// Current state together with the observer's belief about it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BeliefState {
    pub current: StateId,
    pub belief: BTreeSet<StateId>,
}

impl BeliefState {
    pub fn is_certain(&self) -> bool {
        self.belief.len() == 1
    }
}

/// Deterministic automaton over histories whose state after a history is
/// `(last state, belief)`; it accepts at certainty points. Because the state
/// carries the current game state it is also its own product with the game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertaintyAutomaton {
    states: Vec<BeliefState>,
    index: HashMap<BeliefState, usize>,
    /// Per state, `(profile index, game successor, target)` sorted.
    transitions: Vec<Vec<(usize, StateId, usize)>>,
}

/// How the certainty automaton is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Construction {
    /// Subset construction on beliefs directly.
    #[default]
    BeliefTracker,
    /// Determinise the complement of the nondeterministic pair automaton.
    PairAutomaton,
}

impl CertaintyAutomaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, index: usize) -> &BeliefState {
        &self.states[index]
    }

    pub fn states(&self) -> &[BeliefState] {
        &self.states
    }

    pub fn index_of(&self, state: &BeliefState) -> Option<usize> {
        self.index.get(state).copied()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn is_accepting(&self, index: usize) -> bool {
        self.states[index].is_certain()
    }

    pub fn transitions(&self, index: usize) -> &[(usize, StateId, usize)] {
        &self.transitions[index]
    }

    pub fn step(&self, index: usize, profile: usize, successor: StateId) -> Option<usize> {
        self.transitions[index].iter().find(|(p, v, _)| *p == profile && *v == successor).map(|t| t.2)
    }

    /// The automaton state reached by `history`, if it is a history of the game.
    pub fn run(&self, game: &GameStructure, history: &History) -> Option<usize> {
        if history.states()[0] != game.initial() {
            return None;
        }
        let mut q = self.initial();
        for (profile, &v) in history.profiles().iter().zip(&history.states()[1..]) {
            q = self.step(q, game.profile_index(profile), v)?;
        }
        Some(q)
    }

    /// Distinct successor states per state, sorted.
    pub fn successor_graph(&self) -> Vec<Vec<usize>> {
        self.transitions
            .iter()
            .map(|ts| {
                let set: BTreeSet<usize> = ts.iter().map(|t| t.2).collect();
                set.into_iter().collect()
            })
            .collect()
    }

    fn explore(
        initial: BeliefState,
        mut expand: impl FnMut(&BeliefState) -> Vec<(usize, StateId, BeliefState)>,
    ) -> Self {
        let mut automaton = CertaintyAutomaton {
            states: vec![initial.clone()],
            index: HashMap::from([(initial, 0)]),
            transitions: vec![Vec::new()],
        };
        let mut next = 0;
        while next < automaton.states.len() {
            let source = automaton.states[next].clone();
            let mut edges = Vec::new();
            for (profile, v, target) in expand(&source) {
                let id = match automaton.index.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = automaton.states.len();
                        automaton.index.insert(target.clone(), id);
                        automaton.states.push(target);
                        automaton.transitions.push(Vec::new());
                        id
                    }
                };
                edges.push((profile, v, id));
            }
            automaton.transitions[next] = edges;
            next += 1;
        }
        automaton
    }
}

pub fn build_certainty_automaton(game: &GameStructure) -> CertaintyAutomaton {
    build_certainty_automaton_with(game, Construction::BeliefTracker, ObserverMode::Agent0)
}

/// Breadth-first construction of the reachable certainty automaton; states
/// are numbered in discovery order with edges explored by (profile, successor).
pub fn build_certainty_automaton_with(
    game: &GameStructure,
    construction: Construction,
    mode: ObserverMode,
) -> CertaintyAutomaton {
    let observer = Observer::new(game, mode);
    let initial = BeliefState { current: game.initial(), belief: BTreeSet::from([game.initial()]) };
    match construction {
        Construction::BeliefTracker => CertaintyAutomaton::explore(initial, |source| {
            let mut cache: BTreeMap<usize, BTreeSet<StateId>> = BTreeMap::new();
            let mut out = Vec::new();
            for profile in 0..game.profiles().len() {
                for &v in game.successors_by_index(source.current, profile) {
                    let class = observer.class_of(v);
                    let belief = cache
                        .entry(class)
                        .or_insert_with(|| belief_step(game, &observer, &source.belief, class))
                        .clone();
                    out.push((profile, v, BeliefState { current: v, belief }));
                }
            }
            out
        }),
        Construction::PairAutomaton => {
            let pairs = PairAutomaton::with_observer(game, observer);
            CertaintyAutomaton::explore(initial, |source| {
                let subset: BTreeSet<PairState> =
                    source.belief.iter().map(|&w| PairState::Pair(source.current, w)).collect();
                let mut out = Vec::new();
                for profile in 0..game.profiles().len() {
                    for &v in game.successors_by_index(source.current, profile) {
                        let next = pairs.step_set(&subset, profile, v);
                        let belief: BTreeSet<StateId> = next
                            .iter()
                            .filter_map(|q| match q {
                                PairState::Pair(first, second) => {
                                    debug_assert_eq!(*first, v);
                                    Some(*second)
                                }
                                PairState::Sink => None,
                            })
                            .collect();
                        out.push((profile, v, BeliefState { current: v, belief }));
                    }
                }
                out
            })
        }
    }
}

/// State of the nondeterministic pair automaton: the input history's state
/// and a guessed indistinguishable history's state, or the rejecting sink.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairState {
    Pair(StateId, StateId),
    Sink,
}

/// Nondeterministic automaton over letters `(profile, state)` that accepts
/// exactly the histories at which certainty is not attained: it guesses a
/// second history, indistinguishable to the observer, ending elsewhere.
pub struct PairAutomaton<'g> {
    game: &'g GameStructure,
    observer: Observer,
}

impl<'g> PairAutomaton<'g> {
    pub fn new(game: &'g GameStructure, mode: ObserverMode) -> Self {
        Self::with_observer(game, Observer::new(game, mode))
    }

    fn with_observer(game: &'g GameStructure, observer: Observer) -> Self {
        PairAutomaton { game, observer }
    }

    pub fn initial(&self) -> PairState {
        PairState::Pair(self.game.initial(), self.game.initial())
    }

    pub fn is_accepting(&self, state: PairState) -> bool {
        matches!(state, PairState::Pair(a, b) if a != b)
    }

    /// Successors of `state` on the letter `(profile, v)`.
    pub fn step(&self, state: PairState, profile: usize, v: StateId) -> Vec<PairState> {
        let PairState::Pair(first, second) = state else {
            return vec![PairState::Sink];
        };
        if !self.game.successors_by_index(first, profile).contains(&v) {
            return vec![PairState::Sink];
        }
        let class = self.observer.class_of(v);
        let guesses: Vec<PairState> = self
            .game
            .any_successors(second)
            .iter()
            .filter(|&&w| self.observer.class_of(w) == class)
            .map(|&w| PairState::Pair(v, w))
            .collect();
        if guesses.is_empty() {
            vec![PairState::Sink]
        } else {
            guesses
        }
    }

    pub fn step_set(&self, states: &BTreeSet<PairState>, profile: usize, v: StateId) -> BTreeSet<PairState> {
        states.iter().flat_map(|&q| self.step(q, profile, v)).collect()
    }

    /// Subset construction of the complement over the full alphabet.
    pub fn determinise_complement(&self) -> DeterminisedComplement {
        let letters: Vec<(usize, StateId)> =
            (0..self.game.profiles().len()).flat_map(|p| self.game.states().map(move |v| (p, v))).collect();
        let initial = BTreeSet::from([self.initial()]);
        let mut subsets = vec![initial.clone()];
        let mut index = HashMap::from([(initial, 0usize)]);
        let mut transitions = HashMap::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            for &(p, v) in &letters {
                let next = self.step_set(&subsets[s], p, v);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        queue.push_back(id);
                        id
                    }
                };
                transitions.insert((s, p, v), id);
            }
        }
        let accepting = subsets.iter().map(|s| !s.iter().any(|&q| self.is_accepting(q))).collect();
        DeterminisedComplement { subsets, accepting, transitions }
    }
}

/// Deterministic automaton accepting the words the pair automaton rejects:
/// certainty points, plus words that are not histories at all.
pub struct DeterminisedComplement {
    subsets: Vec<BTreeSet<PairState>>,
    accepting: Vec<bool>,
    transitions: HashMap<(usize, usize, StateId), usize>,
}

impl DeterminisedComplement {
    pub fn state_count(&self) -> usize {
        self.subsets.len()
    }

    pub fn subset(&self, index: usize) -> &BTreeSet<PairState> {
        &self.subsets[index]
    }

    pub fn accepts(&self, game: &GameStructure, history: &History) -> bool {
        let mut s = 0;
        for (profile, &v) in history.profiles().iter().zip(&history.states()[1..]) {
            s = self.transitions[&(s, game.profile_index(profile), v)];
        }
        self.accepting[s]
    }
}
