use crate::error::{Error, Result};
use crate::game::{GameStructure, History, LassoPlay};
use crate::graph;

use super::automaton::{build_certainty_automaton, CertaintyAutomaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertaintyVerdict {
    pub recurring: bool,
    /// A play that never attains certainty from some point on.
    pub witness: Option<LassoPlay>,
    /// Least `t` such that every history reaches a certainty point within
    /// `t` rounds; 0 when every history is certain.
    pub minimal_period: Option<usize>,
    /// Number of certainty-automaton states plus one.
    pub state_bound: usize,
}

/// Decides recurring certainty by looking for a cycle of uncertain
/// automaton states.
pub fn decide_recurring_certainty(game: &GameStructure) -> CertaintyVerdict {
    verdict_for(game, &build_certainty_automaton(game))
}

pub fn verdict_for(game: &GameStructure, automaton: &CertaintyAutomaton) -> CertaintyVerdict {
    let n = automaton.state_count();
    let succ = automaton.successor_graph();
    let uncertain: Vec<bool> = (0..n).map(|q| !automaton.is_accepting(q)).collect();
    let state_bound = n + 1;

    match longest_uncertain_path(&succ, &uncertain) {
        Some(edges) => CertaintyVerdict {
            recurring: true,
            witness: None,
            minimal_period: Some(edges.map_or(0, |e| e + 1)),
            state_bound,
        },
        None => CertaintyVerdict {
            recurring: false,
            witness: Some(witness_lasso(game, automaton, &succ, &uncertain)),
            minimal_period: None,
            state_bound,
        },
    }
}

/// `(minimal period, state bound)` for games with recurring certainty.
pub fn certainty_period(game: &GameStructure) -> Result<(usize, usize)> {
    let verdict = decide_recurring_certainty(game);
    match (verdict.minimal_period, verdict.witness) {
        (Some(t), _) => Ok((t, verdict.state_bound)),
        (None, Some(w)) => Err(Error::NotRecurring { witness: render_lasso(game, &w) }),
        (None, None) => unreachable!("verdicts carry a period or a witness"),
    }
}

pub fn render_lasso(game: &GameStructure, lasso: &LassoPlay) -> String {
    let mut cycle = game.state_name(lasso.prefix.last()).to_string();
    for (profile, state) in &lasso.cycle {
        cycle.push_str(&format!(" {} {}", game.profile_label(profile), game.state_name(*state)));
    }
    format!("{} [{}]^w", lasso.prefix.render(game), cycle)
}

/// Edge count of the longest path inside the uncertain subgraph: `None` if it
/// has a cycle, `Some(None)` if it is empty.
fn longest_uncertain_path(succ: &[Vec<usize>], uncertain: &[bool]) -> Option<Option<usize>> {
    let n = succ.len();
    if !uncertain.iter().any(|&u| u) {
        return Some(None);
    }
    // Kahn's algorithm on the uncertain subgraph
    let mut indegree = vec![0usize; n];
    for v in (0..n).filter(|&v| uncertain[v]) {
        for &w in succ[v].iter().filter(|&&w| uncertain[w]) {
            indegree[w] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| uncertain[v] && indegree[v] == 0).collect();
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in succ[v].iter().filter(|&&w| uncertain[w]) {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                order.push(w);
            }
        }
    }
    if order.len() != uncertain.iter().filter(|&&u| u).count() {
        return None;
    }
    let mut longest = vec![0usize; n];
    for &v in order.iter().rev() {
        longest[v] = succ[v].iter().filter(|&&w| uncertain[w]).map(|&w| longest[w] + 1).max().unwrap_or(0);
    }
    Some(order.iter().map(|&v| longest[v]).max())
}

/// Shortest uncertain cycle, then shortest prefix reaching it, then the
/// lexicographically least (state, profile) sequence.
fn witness_lasso(
    game: &GameStructure,
    automaton: &CertaintyAutomaton,
    succ: &[Vec<usize>],
    uncertain: &[bool],
) -> LassoPlay {
    let everything = vec![true; succ.len()];
    // shortest cycle, then shortest prefix, then the labels
    type Key = (usize, usize, Vec<(usize, usize)>);
    let mut best: Option<(Key, LassoPlay)> = None;
    for start in (0..succ.len()).filter(|&q| uncertain[q]) {
        let Some(cycle) = graph::shortest_path(succ, uncertain, start, start) else {
            continue;
        };
        let prefix = graph::shortest_path(succ, &everything, automaton.initial(), start)
            .expect("automaton states are reachable");
        let prefix_steps = label_path(automaton, &prefix);
        let cycle_steps = label_path(automaton, &cycle);
        let key_steps: Vec<(usize, usize)> =
            prefix_steps.iter().chain(&cycle_steps).map(|&(p, v)| (v.index(), p)).collect();
        let key = (cycle_steps.len(), prefix_steps.len(), key_steps);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            let mut history = History::new(game.initial());
            for &(p, v) in &prefix_steps {
                history.push(game.profiles()[p].clone(), v);
            }
            let cycle = cycle_steps.iter().map(|&(p, v)| (game.profiles()[p].clone(), v)).collect();
            let lasso = LassoPlay::new(history, cycle).expect("automaton cycles close");
            best = Some((key, lasso));
        }
    }
    best.expect("a cyclic uncertain subgraph has a cycle").1
}

/// Least edge label between consecutive automaton states of `path`.
fn label_path(automaton: &CertaintyAutomaton, path: &[usize]) -> Vec<(usize, crate::game::StateId)> {
    path.windows(2)
        .map(|w| {
            let (p, v, _) = automaton
                .transitions(w[0])
                .iter()
                .filter(|t| t.2 == w[1])
                .min_by_key(|t| (t.1, t.0))
                .expect("consecutive path states are linked");
            (*p, *v)
        })
        .collect()
}
