//! Certainty analysis: the agent-0 belief tracker, the certainty automaton
//! (with the pair-automaton construction as a cross-check), and the
//! recurring-certainty decision with its period.

mod automaton;
mod belief;
mod verdict;

pub use automaton::{
    build_certainty_automaton, build_certainty_automaton_with, BeliefState, CertaintyAutomaton, Construction,
    DeterminisedComplement, PairAutomaton, PairState,
};
pub use belief::{attains_certainty, belief_run, belief_run_with, belief_step, Observer, ObserverMode};
pub use verdict::{
    certainty_period, decide_recurring_certainty, render_lasso, verdict_for, CertaintyVerdict,
};
