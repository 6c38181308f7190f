use std::collections::BTreeMap;
use std::fmt::Write;

use cgsynth_core::certainty::belief_run;
use cgsynth_core::game::{observe, Agent, GameStructure, History, LassoPlay};
use serde::Serialize;

/// Everything the CLI prints implements this; `--json` uses the serde form.
pub trait Report: Serialize {
    fn text(&self) -> String;
}

pub fn emit<R: Report>(report: &R, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialise"));
    } else {
        print!("{}", report.text());
    }
}

/// One position of a reported play.
#[derive(Serialize)]
pub struct Position {
    /// Profile that led here; absent at the first position.
    pub profile: Option<String>,
    pub state: String,
    /// What agent 0 considers possible here.
    pub belief: Vec<String>,
    pub certain: bool,
}

#[derive(Serialize)]
pub struct PlayReport {
    pub positions: Vec<Position>,
    /// Index where the repeated part starts, for lassos.
    pub cycle_start: Option<usize>,
}

impl PlayReport {
    pub fn history(game: &GameStructure, history: &History) -> Self {
        PlayReport { positions: positions(game, history), cycle_start: None }
    }

    /// The prefix followed by one pass of the cycle.
    pub fn lasso(game: &GameStructure, lasso: &LassoPlay) -> Self {
        let unrolled = lasso.unroll(lasso.cycle.len());
        PlayReport { positions: positions(game, &unrolled), cycle_start: Some(lasso.prefix.rounds()) }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, p) in self.positions.iter().enumerate() {
            if self.cycle_start == Some(k) {
                out.push_str("  -- cycle --\n");
            }
            let step = p.profile.as_deref().map_or(String::new(), |s| format!("{s} -> "));
            let mark = if p.certain { "certain" } else { "uncertain" };
            let _ = writeln!(out, "  {k:>3}  {step}{}  ({mark}: {{{}}})", p.state, p.belief.join(","));
        }
        if let Some(start) = self.cycle_start {
            let _ = writeln!(out, "  -- back to {start} --");
        }
        out
    }
}

fn positions(game: &GameStructure, history: &History) -> Vec<Position> {
    let observations = observe(game, history, Agent::Zero).expect("agent 0 always exists");
    let beliefs = belief_run(game, &observations).expect("observations come from the game");
    history
        .states()
        .iter()
        .zip(&beliefs)
        .enumerate()
        .map(|(k, (&s, belief))| Position {
            profile: (k > 0).then(|| game.profile_label(&history.profiles()[k - 1])),
            state: game.state_name(s).to_string(),
            belief: belief.iter().map(|&b| game.state_name(b).to_string()).collect(),
            certain: belief.len() == 1,
        })
        .collect()
}

#[derive(Serialize)]
pub struct ValidateReport {
    pub name: Option<String>,
    pub states: usize,
    pub players: usize,
    pub moves: usize,
    pub colours: Vec<String>,
    pub agent0_classes: usize,
    /// Player confusions between differently coloured states.
    pub observability_violations: Vec<String>,
    pub has_objective: bool,
}

impl Report for ValidateReport {
    fn text(&self) -> String {
        let mut out = format!(
            "valid: {} states, {} players, {} moves, {} agent-0 classes\n",
            self.states, self.players, self.moves, self.agent0_classes
        );
        let _ = writeln!(out, "colours: {}", self.colours.join(", "));
        if self.observability_violations.is_empty() {
            out.push_str("colouring is observable\n");
        } else {
            for v in &self.observability_violations {
                let _ = writeln!(out, "not observable: {v}");
            }
        }
        if !self.has_objective {
            out.push_str("no objective\n");
        }
        out
    }
}

#[derive(Serialize)]
pub struct CertaintyReport {
    pub recurring: bool,
    pub minimal_period: Option<usize>,
    /// Tracker states plus one.
    pub state_bound: usize,
    pub tracker_states: usize,
    pub observer: String,
    pub construction: String,
    pub witness: Option<PlayReport>,
}

impl Report for CertaintyReport {
    fn text(&self) -> String {
        let mut out = String::new();
        if self.recurring {
            let _ = writeln!(out, "recurring certainty: yes");
            let _ = writeln!(out, "minimal period: {}", self.minimal_period.unwrap_or(0));
        } else {
            let _ = writeln!(out, "recurring certainty: no");
        }
        let _ = writeln!(out, "state bound: {} ({} tracker states)", self.state_bound, self.tracker_states);
        if let Some(w) = &self.witness {
            out.push_str("witness lasso (never certain on the cycle):\n");
            out.push_str(&w.render());
        }
        out
    }
}

#[derive(Serialize)]
pub struct NodeSummary {
    pub worlds: usize,
    /// State name -> number of worlds ending there.
    pub states: BTreeMap<String, usize>,
    pub colour: Option<String>,
    pub certain: bool,
    pub choices: usize,
}

#[derive(Serialize)]
pub struct TrackReport {
    pub nodes: usize,
    pub edges: usize,
    pub largest_model: usize,
    pub observable: bool,
    pub components: String,
    pub node_summaries: Vec<NodeSummary>,
}

impl Report for TrackReport {
    fn text(&self) -> String {
        let mut out = format!(
            "tracking arena: {} nodes, {} edges, largest model {} worlds ({} components)\n",
            self.nodes, self.edges, self.largest_model, self.components
        );
        if !self.observable {
            out.push_str("warning: some node mixes colours\n");
        }
        for (i, n) in self.node_summaries.iter().enumerate() {
            let states: Vec<String> =
                n.states.iter().map(|(s, &k)| if k == 1 { s.clone() } else { format!("{k}*{s}") }).collect();
            let _ = writeln!(
                out,
                "  n{i}: {} worlds [{}] colour {} choices {}{}",
                n.worlds,
                states.join(" "),
                n.colour.as_deref().unwrap_or("?"),
                n.choices,
                if n.certain { " certain" } else { "" }
            );
        }
        out
    }
}

#[derive(Serialize)]
pub struct SolveReport {
    pub coalition_wins: bool,
    pub arena_nodes: usize,
    pub automaton_states: usize,
    pub product_nodes: usize,
    pub winning_nodes: usize,
}

impl Report for SolveReport {
    fn text(&self) -> String {
        format!(
            "{}\narena {} nodes, automaton {} states, product {} nodes ({} winning)\n",
            if self.coalition_wins { "coalition wins" } else { "coalition loses" },
            self.arena_nodes,
            self.automaton_states,
            self.product_nodes,
            self.winning_nodes
        )
    }
}

#[derive(Serialize)]
pub struct MachineSummary {
    pub player: String,
    pub states: usize,
    pub transitions: usize,
}

#[derive(Serialize)]
pub struct SynthReport {
    pub coalition_wins: bool,
    pub output: Option<String>,
    pub machines: Vec<MachineSummary>,
}

impl Report for SynthReport {
    fn text(&self) -> String {
        if !self.coalition_wins {
            return "coalition loses; no strategy written\n".to_string();
        }
        let mut out = String::new();
        for m in &self.machines {
            let _ = writeln!(out, "player {}: {} states, {} transitions", m.player, m.states, m.transitions);
        }
        if let Some(path) = &self.output {
            let _ = writeln!(out, "wrote {path}");
        }
        out
    }
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub holds: bool,
    pub configurations: usize,
    /// A consistent play violating the objective.
    pub counterexample: Option<PlayReport>,
    /// A consistent history after which a machine has no move.
    pub undefined: Option<UndefinedReport>,
}

#[derive(Serialize)]
pub struct UndefinedReport {
    pub player: String,
    pub history: PlayReport,
}

impl Report for VerifyReport {
    fn text(&self) -> String {
        let mut out = format!(
            "{} ({} configurations)\n",
            if self.holds { "profile wins" } else { "profile fails" },
            self.configurations
        );
        if let Some(c) = &self.counterexample {
            out.push_str("counterexample lasso:\n");
            out.push_str(&c.render());
        }
        if let Some(u) = &self.undefined {
            let _ = writeln!(out, "player {} has no move after:", u.player);
            out.push_str(&u.history.render());
        }
        out
    }
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub seed: u64,
    pub summary: cgsynth_core::synthesis::SimulationSummary,
    pub play: PlayReport,
}

impl Report for SimulateReport {
    fn text(&self) -> String {
        let s = &self.summary;
        let mut out = format!("{} rounds, {} certainty points\n", s.rounds, s.certainty_points);
        let gaps: Vec<String> = s.gaps.iter().map(|(g, k)| format!("{g}:{k}")).collect();
        let _ = writeln!(out, "uncertain stretches (length:count): {}", gaps.join(" "));
        let colours: Vec<String> = s.colours.iter().map(|(c, k)| format!("{c}:{k}")).collect();
        let _ = writeln!(out, "colour visits: {}", colours.join(" "));
        out.push_str(&self.play.render());
        out
    }
}

#[derive(Serialize)]
pub struct DotReport {
    pub what: String,
    pub output: String,
    pub node_lines: usize,
}

impl Report for DotReport {
    fn text(&self) -> String {
        format!("wrote {} ({} graph, {} nodes)\n", self.output, self.what, self.node_lines)
    }
}
