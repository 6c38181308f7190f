//! Graphviz text for the main artifacts. Output is deterministic: nodes and
//! edges are emitted in a fixed order and labels contain no addresses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::str::FromStr;

use crate::certainty::CertaintyAutomaton;
use crate::error::{Error, Result};
use crate::game::GameStructure;
use crate::synthesis::{profile_at, ProfileProduct, StrategyMachine};
use crate::tracking::TrackingArena;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DotKind {
    Arena,
    Beliefs,
    Strategy,
    VerificationProduct,
}

impl FromStr for DotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arena" => Ok(DotKind::Arena),
            "beliefs" => Ok(DotKind::Beliefs),
            "strategy" => Ok(DotKind::Strategy),
            "verification-product" => Ok(DotKind::VerificationProduct),
            other => Err(Error::Format(format!("unknown graph kind `{other}`"))),
        }
    }
}

pub enum DotArtifact<'a> {
    Arena(&'a TrackingArena),
    Beliefs(&'a CertaintyAutomaton),
    Strategy(&'a [StrategyMachine]),
    VerificationProduct(&'a ProfileProduct, &'a [StrategyMachine]),
}

impl DotArtifact<'_> {
    fn kind(&self) -> DotKind {
        match self {
            DotArtifact::Arena(_) => DotKind::Arena,
            DotArtifact::Beliefs(_) => DotKind::Beliefs,
            DotArtifact::Strategy(_) => DotKind::Strategy,
            DotArtifact::VerificationProduct(..) => DotKind::VerificationProduct,
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn export_dot(game: &GameStructure, kind: DotKind, artifact: &DotArtifact) -> Result<String> {
    if artifact.kind() != kind {
        return Err(Error::Format(format!("expected a {kind:?} artifact, got {:?}", artifact.kind())));
    }
    let mut out = String::new();
    match artifact {
        DotArtifact::Arena(arena) => arena_dot(game, arena, &mut out),
        DotArtifact::Beliefs(automaton) => beliefs_dot(game, automaton, &mut out),
        DotArtifact::Strategy(machines) => strategy_dot(game, machines, &mut out),
        DotArtifact::VerificationProduct(product, machines) => product_dot(game, product, machines, &mut out),
    }
    Ok(out)
}

fn arena_dot(game: &GameStructure, arena: &TrackingArena, out: &mut String) {
    let mut order: Vec<usize> = (0..arena.node_count()).collect();
    order.sort_by(|&a, &b| arena.node(a).key.cmp(&arena.node(b).key));
    let mut rank = vec![0; order.len()];
    for (r, &n) in order.iter().enumerate() {
        rank[n] = r;
    }
    out.push_str("digraph arena {\n  rankdir=LR;\n");
    for &n in &order {
        let node = arena.node(n);
        let states: Vec<&str> = node.model.state_multiset().iter().map(|&s| game.state_name(s)).collect();
        let colour = node.colour.map_or("?".to_string(), |c| game.colour_name(c).to_string());
        let label =
            format!("{} worlds\\n[{}]\\ncolour {}", node.model.world_count(), states.join(","), colour);
        let shape = if node.is_certain() { "doublecircle" } else { "ellipse" };
        let initial = if n == arena.initial() { ", style=bold" } else { "" };
        let _ = writeln!(out, "  n{} [label={}, shape={shape}{initial}];", rank[n], quote(&label));
    }
    for &n in &order {
        for (g, group) in arena.node(n).groups.iter().enumerate() {
            for &s in &group.successors {
                let _ = writeln!(out, "  n{} -> n{} [label=\"g{g}\"];", rank[n], rank[s]);
            }
        }
    }
    out.push_str("}\n");
}

fn beliefs_dot(game: &GameStructure, automaton: &CertaintyAutomaton, out: &mut String) {
    out.push_str("digraph beliefs {\n  rankdir=LR;\n");
    for q in 0..automaton.state_count() {
        let b = automaton.state(q);
        let label = format!("{} {}", game.state_name(b.current), game.state_set_name(&b.belief));
        let shape = if automaton.is_accepting(q) { "doublecircle" } else { "ellipse" };
        let _ = writeln!(out, "  q{q} [label={}, shape={shape}];", quote(&label));
    }
    for q in 0..automaton.state_count() {
        let mut by_target: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
        for &(_, v, t) in automaton.transitions(q) {
            by_target.entry(t).or_default().insert(game.state_name(v));
        }
        for (t, names) in by_target {
            let label = names.into_iter().collect::<Vec<_>>().join(",");
            let _ = writeln!(out, "  q{q} -> q{t} [label={}];", quote(&label));
        }
    }
    out.push_str("}\n");
}

fn strategy_dot(game: &GameStructure, machines: &[StrategyMachine], out: &mut String) {
    out.push_str("digraph strategy {\n  rankdir=LR;\n");
    for m in machines {
        let player = game.player(m.player);
        let _ = writeln!(
            out,
            "  subgraph cluster_p{} {{\n    label={};",
            m.player,
            quote(&format!("player {}", player.name))
        );
        for s in 0..m.state_count() {
            let label = format!("{} / {}", m.labels[s], player.actions[m.output[s]]);
            let style = if s == m.initial { ", style=bold" } else { "" };
            let _ = writeln!(out, "    p{}_{s} [label={}{style}];", m.player, quote(&label));
        }
        out.push_str("  }\n");
    }
    for m in machines {
        let player = game.player(m.player);
        for (&(s, o), &t) in &m.transitions {
            let _ = writeln!(
                out,
                "  p{0}_{s} -> p{0}_{t} [label={1}];",
                m.player,
                quote(&player.observation_names[o])
            );
        }
    }
    out.push_str("}\n");
}

fn product_dot(
    game: &GameStructure,
    product: &ProfileProduct,
    machines: &[StrategyMachine],
    out: &mut String,
) {
    out.push_str("digraph verification {\n  rankdir=LR;\n");
    for (c, config) in product.configs.iter().enumerate() {
        let memory: Vec<String> =
            machines.iter().zip(&config.memory).map(|(m, &s)| m.labels[s].clone()).collect();
        let profile = game.profile_label(&profile_at(machines, config));
        let label = format!(
            "{} {}\\n[{}] q{} p{}",
            game.state_name(config.state),
            profile,
            memory.join(","),
            config.automaton,
            product.priorities[c]
        );
        let shape = if product.priorities[c].is_multiple_of(2) { "ellipse" } else { "box" };
        let _ = writeln!(out, "  c{c} [label={}, shape={shape}];", quote(&label));
    }
    for (c, next) in product.successors.iter().enumerate() {
        for &d in next {
            let _ = writeln!(out, "  c{c} -> c{d};");
        }
    }
    out.push_str("}\n");
}

/// Node count of a DOT text: lines declaring a node.
pub fn node_lines(dot: &str) -> usize {
    dot.lines().map(str::trim).filter(|l| l.contains(" [label=") && !l.contains("->")).count()
}
