//! Observable omega-regular objectives over state colours, their compilation
//! to deterministic parity automata, and the product with a tracking arena.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{observability_violations, ColourId, GameStructure, StateId};
use crate::parity::{Owner, ParityGame};
use crate::tracking::TrackingArena;

/// A winning condition over colour names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ObjectiveSpec {
    /// Eventually visit one of the colours.
    Reachability {
        colours: BTreeSet<String>,
    },
    /// Never visit any of the colours.
    Safety {
        colours: BTreeSet<String>,
    },
    /// Visit the colours infinitely often.
    Buchi {
        colours: BTreeSet<String>,
    },
    /// Visit the colours only finitely often.
    Cobuchi {
        colours: BTreeSet<String>,
    },
    /// Least priority seen infinitely often is even.
    Parity {
        priorities: BTreeMap<String, u32>,
    },
    Automaton(ExplicitAutomaton),
}

/// A deterministic parity automaton written out by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitAutomaton {
    pub states: Vec<String>,
    pub initial: String,
    /// state -> colour -> state
    pub transitions: BTreeMap<String, BTreeMap<String, String>>,
    pub priorities: BTreeMap<String, u32>,
}

fn colours_of(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

impl ObjectiveSpec {
    pub fn buchi(colours: &[&str]) -> Self {
        ObjectiveSpec::Buchi { colours: colours_of(colours) }
    }

    pub fn cobuchi(colours: &[&str]) -> Self {
        ObjectiveSpec::Cobuchi { colours: colours_of(colours) }
    }

    pub fn reachability(colours: &[&str]) -> Self {
        ObjectiveSpec::Reachability { colours: colours_of(colours) }
    }

    pub fn safety(colours: &[&str]) -> Self {
        ObjectiveSpec::Safety { colours: colours_of(colours) }
    }

    /// The complementary objective: a play satisfies exactly one of the two.
    pub fn dual(&self) -> ObjectiveSpec {
        match self {
            ObjectiveSpec::Reachability { colours } => ObjectiveSpec::Safety { colours: colours.clone() },
            ObjectiveSpec::Safety { colours } => ObjectiveSpec::Reachability { colours: colours.clone() },
            ObjectiveSpec::Buchi { colours } => ObjectiveSpec::Cobuchi { colours: colours.clone() },
            ObjectiveSpec::Cobuchi { colours } => ObjectiveSpec::Buchi { colours: colours.clone() },
            ObjectiveSpec::Parity { priorities } => ObjectiveSpec::Parity {
                priorities: priorities.iter().map(|(c, p)| (c.clone(), p + 1)).collect(),
            },
            ObjectiveSpec::Automaton(a) => ObjectiveSpec::Automaton(ExplicitAutomaton {
                priorities: a.priorities.iter().map(|(q, p)| (q.clone(), p + 1)).collect(),
                ..a.clone()
            }),
        }
    }
}

/// A complete deterministic parity automaton over colour indices. The
/// priority of a run position is the priority of the state entered after
/// reading that position's colour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAutomaton {
    pub state_names: Vec<String>,
    pub initial: usize,
    /// `transitions[state][colour]`
    pub transitions: Vec<Vec<usize>>,
    pub priorities: Vec<u32>,
}

impl ParityAutomaton {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.transitions.first().map_or(0, Vec::len)
    }

    pub fn step(&self, state: usize, colour: ColourId) -> usize {
        self.transitions[state][colour]
    }

    /// Acceptance of the ultimately periodic word `prefix . cycle^omega`.
    pub fn accepts_lasso(&self, prefix: &[ColourId], cycle: &[ColourId]) -> bool {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        let mut q = self.initial;
        for &c in prefix {
            q = self.step(q, c);
        }
        // iterate the cycle until the state at the cycle start repeats
        let mut starts: Vec<usize> = Vec::new();
        let mut priorities: Vec<Vec<u32>> = Vec::new();
        loop {
            if let Some(pos) = starts.iter().position(|&s| s == q) {
                let least = priorities[pos..].iter().flatten().min().copied().unwrap();
                return least % 2 == 0;
            }
            starts.push(q);
            let mut seen = Vec::with_capacity(cycle.len());
            for &c in cycle {
                q = self.step(q, c);
                seen.push(self.priorities[q]);
            }
            priorities.push(seen);
        }
    }
}

/// Player-colour confusions: `Ok(())` iff no player confuses two states of
/// different colours.
pub fn check_observability(game: &GameStructure) -> Result<(), Vec<(usize, StateId, StateId)>> {
    let violations = observability_violations(game);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn resolve(colours: &[String], set: &BTreeSet<String>) -> Result<Vec<bool>> {
    let mut member = vec![false; colours.len()];
    for name in set {
        let Some(c) = colours.iter().position(|x| x == name) else {
            return Err(Error::Objective(format!("unknown colour `{name}`")));
        };
        member[c] = true;
    }
    Ok(member)
}

/// Compiles `spec` over the colour alphabet `colours` (index = colour id).
pub fn compile_objective(spec: &ObjectiveSpec, colours: &[String]) -> Result<ParityAutomaton> {
    let k = colours.len();
    let two_state = |names: [&str; 2], table: Vec<Vec<usize>>, priorities: [u32; 2]| ParityAutomaton {
        state_names: names.iter().map(|s| s.to_string()).collect(),
        initial: 0,
        transitions: table,
        priorities: priorities.to_vec(),
    };
    Ok(match spec {
        ObjectiveSpec::Buchi { colours: set } | ObjectiveSpec::Cobuchi { colours: set } => {
            let member = resolve(colours, set)?;
            let row: Vec<usize> = (0..k).map(|c| if member[c] { 1 } else { 0 }).collect();
            let priorities = if matches!(spec, ObjectiveSpec::Buchi { .. }) { [1, 0] } else { [2, 1] };
            two_state(["other", "seen"], vec![row.clone(), row], priorities)
        }
        ObjectiveSpec::Reachability { colours: set } => {
            let member = resolve(colours, set)?;
            let pre: Vec<usize> = (0..k).map(|c| if member[c] { 1 } else { 0 }).collect();
            two_state(["searching", "goal"], vec![pre, vec![1; k]], [1, 0])
        }
        ObjectiveSpec::Safety { colours: set } => {
            let member = resolve(colours, set)?;
            let safe: Vec<usize> = (0..k).map(|c| if member[c] { 1 } else { 0 }).collect();
            two_state(["safe", "violated"], vec![safe, vec![1; k]], [0, 1])
        }
        ObjectiveSpec::Parity { priorities } => {
            for name in priorities.keys() {
                if !colours.contains(name) {
                    return Err(Error::Objective(format!("unknown colour `{name}`")));
                }
            }
            let mut prio = Vec::with_capacity(k);
            for name in colours {
                match priorities.get(name) {
                    Some(&p) => prio.push(p),
                    None => return Err(Error::Objective(format!("colour `{name}` has no priority"))),
                }
            }
            ParityAutomaton {
                state_names: colours.iter().map(|c| format!("last={c}")).collect(),
                initial: 0,
                transitions: vec![(0..k).collect(); k],
                priorities: prio,
            }
        }
        ObjectiveSpec::Automaton(a) => compile_explicit(a, colours)?,
    })
}

fn compile_explicit(a: &ExplicitAutomaton, colours: &[String]) -> Result<ParityAutomaton> {
    let index: HashMap<&str, usize> = a.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    if index.len() != a.states.len() {
        return Err(Error::Objective("automaton states are not distinct".into()));
    }
    let lookup = |name: &str| {
        index.get(name).copied().ok_or_else(|| Error::Objective(format!("unknown automaton state `{name}`")))
    };
    let initial = lookup(&a.initial)?;
    let mut transitions = Vec::with_capacity(a.states.len());
    let mut priorities = Vec::with_capacity(a.states.len());
    for state in &a.states {
        let row = a
            .transitions
            .get(state)
            .ok_or_else(|| Error::Objective(format!("automaton state `{state}` has no transitions")))?;
        for colour in row.keys() {
            if !colours.contains(colour) {
                return Err(Error::Objective(format!("unknown colour `{colour}`")));
            }
        }
        let mut targets = Vec::with_capacity(colours.len());
        for colour in colours {
            let target = row.get(colour).ok_or_else(|| {
                Error::Objective(format!("automaton is not total: ({state}, {colour}) missing"))
            })?;
            targets.push(lookup(target)?);
        }
        transitions.push(targets);
        priorities.push(
            *a.priorities
                .get(state)
                .ok_or_else(|| Error::Objective(format!("automaton state `{state}` has no priority")))?,
        );
    }
    Ok(ParityAutomaton { state_names: a.states.clone(), initial, transitions, priorities })
}

/// Where a product node came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductNode {
    /// Coalition to move: arena node and automaton state after reading its colour.
    Model { arena: usize, automaton: usize },
    /// Nature to move, after the coalition picked an edge group.
    Choice { arena: usize, automaton: usize, group: usize },
}

/// The parity game of a tracking arena and a condition automaton.
#[derive(Clone, Debug)]
pub struct ProductGame {
    pub game: ParityGame,
    pub nodes: Vec<ProductNode>,
    index: HashMap<ProductNode, usize>,
}

impl ProductGame {
    pub fn node_of(&self, node: ProductNode) -> Option<usize> {
        self.index.get(&node).copied()
    }

    pub fn model_node_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, ProductNode::Model { .. })).count()
    }
}

/// Builds the full product of `arena` and `automaton`: coalition nodes for
/// every (arena node, automaton state) pair, and one nature node per edge
/// group of each. Intermediate nodes inherit the priority of their parent.
pub fn build_parity_game(arena: &TrackingArena, automaton: &ParityAutomaton) -> Result<ProductGame> {
    if !arena.observable() {
        return Err(Error::Observability(
            "arena was built from a game whose colouring is not observable".into(),
        ));
    }
    if automaton.alphabet_size() < arena.colour_count() {
        return Err(Error::AlphabetMismatch {
            automaton: automaton.alphabet_size(),
            arena: arena.colour_count(),
        });
    }
    let colour = |node: usize| arena.node(node).colour.expect("observable arenas are coloured");

    let mut nodes = Vec::new();
    for a in 0..arena.node_count() {
        for q in 0..automaton.state_count() {
            nodes.push(ProductNode::Model { arena: a, automaton: q });
        }
    }
    for a in 0..arena.node_count() {
        for q in 0..automaton.state_count() {
            for g in 0..arena.node(a).groups.len() {
                nodes.push(ProductNode::Choice { arena: a, automaton: q, group: g });
            }
        }
    }
    let index: HashMap<ProductNode, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();

    let mut owner = Vec::with_capacity(nodes.len());
    let mut priority = Vec::with_capacity(nodes.len());
    let mut successors = Vec::with_capacity(nodes.len());
    for node in &nodes {
        match *node {
            ProductNode::Model { arena: a, automaton: q } => {
                owner.push(Owner::Coalition);
                priority.push(automaton.priorities[q]);
                successors.push(
                    (0..arena.node(a).groups.len())
                        .map(|g| index[&ProductNode::Choice { arena: a, automaton: q, group: g }])
                        .collect(),
                );
            }
            ProductNode::Choice { arena: a, automaton: q, group: g } => {
                owner.push(Owner::Nature);
                priority.push(automaton.priorities[q]);
                successors.push(
                    arena.node(a).groups[g]
                        .successors
                        .iter()
                        .map(|&b| {
                            let next = automaton.step(q, colour(b));
                            index[&ProductNode::Model { arena: b, automaton: next }]
                        })
                        .collect(),
                );
            }
        }
    }
    let start = automaton.step(automaton.initial, colour(arena.initial()));
    let initial = index[&ProductNode::Model { arena: arena.initial(), automaton: start }];
    let game = ParityGame::new(owner, priority, successors, initial)?;
    Ok(ProductGame { game, nodes, index })
}
