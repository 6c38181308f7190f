mod common;

use std::collections::{BTreeMap, BTreeSet};

use cgsynth_core::objective::{compile_objective, ExplicitAutomaton, ObjectiveSpec};
use common::rng;
use proptest::prelude::*;
use rand::Rng;

const COLOURS: [&str; 3] = ["red", "green", "blue"];

fn alphabet() -> Vec<String> {
    COLOURS.iter().map(|c| c.to_string()).collect()
}

fn lasso(seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut r = rng(seed);
    let total = r.gen_range(1..=12);
    let split = r.gen_range(0..total);
    let word: Vec<usize> = (0..total).map(|_| r.gen_range(0..COLOURS.len())).collect();
    (word[..split].to_vec(), word[split..].to_vec())
}

/// Ground truth straight from the definitions over the colours that occur
/// somewhere and the colours that recur forever.
fn holds(spec: &ObjectiveSpec, prefix: &[usize], cycle: &[usize]) -> bool {
    let name = |c: &usize| COLOURS[*c].to_string();
    let occur: BTreeSet<String> = prefix.iter().chain(cycle).map(name).collect();
    let recur: BTreeSet<String> = cycle.iter().map(name).collect();
    match spec {
        ObjectiveSpec::Reachability { colours } => !occur.is_disjoint(colours),
        ObjectiveSpec::Safety { colours } => occur.is_disjoint(colours),
        ObjectiveSpec::Buchi { colours } => !recur.is_disjoint(colours),
        ObjectiveSpec::Cobuchi { colours } => recur.is_disjoint(colours),
        ObjectiveSpec::Parity { priorities } => recur.iter().map(|c| priorities[c]).min().unwrap() % 2 == 0,
        ObjectiveSpec::Automaton(_) => unreachable!(),
    }
}

fn subset(mask: u8) -> Vec<&'static str> {
    (0..3).filter(|i| mask & (1 << i) != 0).map(|i| COLOURS[i]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn compiled_automata_agree_with_the_definitions(seed in any::<u64>(), mask in 0u8..8) {
        let (prefix, cycle) = lasso(seed);
        let set = subset(mask);
        for spec in [
            ObjectiveSpec::reachability(&set),
            ObjectiveSpec::safety(&set),
            ObjectiveSpec::buchi(&set),
            ObjectiveSpec::cobuchi(&set),
        ] {
            let a = compile_objective(&spec, &alphabet()).unwrap();
            prop_assert_eq!(a.accepts_lasso(&prefix, &cycle), holds(&spec, &prefix, &cycle), "{:?}", spec);
            let d = compile_objective(&spec.dual(), &alphabet()).unwrap();
            prop_assert_ne!(a.accepts_lasso(&prefix, &cycle), d.accepts_lasso(&prefix, &cycle));
        }
    }

    #[test]
    fn colour_priorities_agree_with_the_definition(seed in any::<u64>(), p in proptest::collection::vec(0u32..5, 3)) {
        let (prefix, cycle) = lasso(seed);
        let priorities: BTreeMap<String, u32> = COLOURS.iter().map(|c| c.to_string()).zip(p).collect();
        let spec = ObjectiveSpec::Parity { priorities };
        let a = compile_objective(&spec, &alphabet()).unwrap();
        prop_assert_eq!(a.accepts_lasso(&prefix, &cycle), holds(&spec, &prefix, &cycle));
        let d = compile_objective(&spec.dual(), &alphabet()).unwrap();
        prop_assert_ne!(a.accepts_lasso(&prefix, &cycle), d.accepts_lasso(&prefix, &cycle));
    }

    #[test]
    fn rotating_the_cycle_keeps_the_verdict(seed in any::<u64>(), mask in 0u8..8, shift in 0usize..12) {
        let (prefix, cycle) = lasso(seed);
        let k = shift % cycle.len();
        let mut longer = prefix.clone();
        longer.extend_from_slice(&cycle[..k]);
        let rotated: Vec<usize> = cycle[k..].iter().chain(&cycle[..k]).copied().collect();
        let a = compile_objective(&ObjectiveSpec::buchi(&subset(mask)), &alphabet()).unwrap();
        prop_assert_eq!(a.accepts_lasso(&prefix, &cycle), a.accepts_lasso(&longer, &rotated));
    }
}

/// "red is eventually followed by green", as a hand-written automaton.
fn response() -> ExplicitAutomaton {
    let row = |red: &str, green: &str, blue: &str| -> BTreeMap<String, String> {
        [("red", red), ("green", green), ("blue", blue)]
            .into_iter()
            .map(|(c, q)| (c.to_string(), q.to_string()))
            .collect()
    };
    ExplicitAutomaton {
        states: vec!["idle".into(), "waiting".into()],
        initial: "idle".into(),
        transitions: [
            ("idle".to_string(), row("waiting", "idle", "idle")),
            ("waiting".to_string(), row("waiting", "idle", "waiting")),
        ]
        .into_iter()
        .collect(),
        priorities: [("idle".to_string(), 0), ("waiting".to_string(), 1)].into_iter().collect(),
    }
}

#[test]
fn explicit_automaton_matches_a_response_oracle() {
    let spec = ObjectiveSpec::Automaton(response());
    let a = compile_objective(&spec, &alphabet()).unwrap();
    for seed in 0..500 {
        let (prefix, cycle) = lasso(seed);
        // a pending request at some point of the cycle is answered iff green recurs
        // or red never recurs (and any request in the prefix is answered).
        let recur: BTreeSet<usize> = cycle.iter().copied().collect();
        let expected = if recur.contains(&0) {
            recur.contains(&1)
        } else {
            let last_red = prefix.iter().rposition(|&c| c == 0);
            match last_red {
                None => true,
                Some(i) => prefix[i..].contains(&1) || cycle.contains(&1),
            }
        };
        assert_eq!(a.accepts_lasso(&prefix, &cycle), expected, "{prefix:?} {cycle:?}");
    }
}

#[test]
fn objectives_reject_unknown_colours() {
    assert!(compile_objective(&ObjectiveSpec::buchi(&["purple"]), &alphabet()).is_err());
    let mut partial = BTreeMap::new();
    partial.insert("red".to_string(), 0);
    assert!(compile_objective(&ObjectiveSpec::Parity { priorities: partial }, &alphabet()).is_err());
}
