mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cgsynth_core::certainty::{
    build_certainty_automaton, build_certainty_automaton_with, verdict_for, Construction, ObserverMode,
};
use cgsynth_core::game::{observability_violations, GameStructure};
use cgsynth_core::io::{
    export_dot, node_lines, parse_game_file, parse_strategy_file, DotArtifact, DotKind, GameDocument,
    StrategyFile,
};
use cgsynth_core::objective::ObjectiveSpec;
use cgsynth_core::synthesis::{
    build_profile_product, decide_coalition_winner, distribute_strategy, simulate, verify_profile, Failure,
    StrategyMachine,
};
use cgsynth_core::tracking::{build_tracking_arena_with, ArenaOptions, ComponentMode};
use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use report::*;

#[derive(Parser)]
#[command(
    name = "cgsynth",
    version,
    about = "Certainty analysis and strategy synthesis for coordination games"
)]
struct Cli {
    /// Print machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    /// More logging on stderr (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct Limits {
    /// Give up once the tracking arena has this many nodes.
    #[arg(long, default_value_t = 100_000)]
    node_limit: usize,
    /// Give up once one epistemic model has this many worlds.
    #[arg(long, default_value_t = 4096)]
    world_limit: usize,
    /// Which agents' relations split successor models into components.
    #[arg(long, value_enum, default_value_t = Components::All)]
    components: Components,
}

impl Limits {
    fn options(self) -> ArenaOptions {
        ArenaOptions {
            node_limit: self.node_limit,
            world_limit: self.world_limit,
            components: match self.components {
                Components::All => ComponentMode::AllAgents,
                Components::PlayersOnly => ComponentMode::PlayersOnly,
            },
            ..ArenaOptions::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Components {
    All,
    PlayersOnly,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObserverArg {
    Agent0,
    Joint,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    Tracker,
    Pairs,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Arena,
    Beliefs,
    Strategy,
    VerificationProduct,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a game file.
    Validate { file: PathBuf },
    /// Decide recurring certainty and report the minimal period.
    Certainty {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ObserverArg::Agent0)]
        observer: ObserverArg,
        #[arg(long, value_enum, default_value_t = ConstructionArg::Tracker)]
        construction: ConstructionArg,
    },
    /// Build the tracking arena.
    Track {
        file: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Decide whether the coalition wins.
    Solve {
        file: PathBuf,
        /// Objective as JSON, overriding the one in the file.
        #[arg(long)]
        objective: Option<String>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Synthesise one strategy machine per player.
    Synth {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        objective: Option<String>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check a strategy profile against the objective.
    Verify {
        file: PathBuf,
        strategy: PathBuf,
        #[arg(long)]
        objective: Option<String>,
    },
    /// Play a strategy profile against random nature.
    Simulate {
        file: PathBuf,
        strategy: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Export a graph in DOT format.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        /// Strategy file, for `strategy` and `verification-product`.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long)]
        objective: Option<String>,
        /// Write here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
}

/// Verdict of a successful run: `false` maps to exit code 1.
type Outcome = Result<bool, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load_game(path: &Path) -> Result<GameDocument, String> {
    let doc = parse_game_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    info!("loaded {} ({} states)", path.display(), doc.game.state_count());
    Ok(doc)
}

fn load_strategy(path: &Path, game: &GameStructure) -> Result<Vec<StrategyMachine>, String> {
    parse_strategy_file(&read(path)?, game).map_err(|e| format!("{}: {e}", path.display()))
}

fn objective_of(doc: &GameDocument, arg: &Option<String>) -> Result<ObjectiveSpec, String> {
    match arg {
        Some(text) => serde_json::from_str(text).map_err(|e| format!("bad --objective: {e}")),
        None => {
            doc.objective.clone().ok_or_else(|| "game file has no objective; pass --objective".to_string())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let json = cli.json;
    match &cli.command {
        Command::Validate { file } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let report = ValidateReport {
                name: doc.name.clone(),
                states: g.state_count(),
                players: g.player_count(),
                moves: g.move_count(),
                colours: g.colour_names().to_vec(),
                agent0_classes: g.agent0().class_count(),
                observability_violations: observability_violations(g)
                    .into_iter()
                    .map(|(i, u, v)| {
                        format!(
                            "player {} confuses {} and {}",
                            g.player(i).name,
                            g.state_name(u),
                            g.state_name(v)
                        )
                    })
                    .collect(),
                has_objective: doc.objective.is_some(),
            };
            emit(&report, json);
            Ok(true)
        }
        Command::Certainty { file, observer, construction } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let mode = match observer {
                ObserverArg::Agent0 => ObserverMode::Agent0,
                ObserverArg::Joint => ObserverMode::Joint,
            };
            let build = match construction {
                ConstructionArg::Tracker => Construction::BeliefTracker,
                ConstructionArg::Pairs => Construction::PairAutomaton,
            };
            let automaton = build_certainty_automaton_with(g, build, mode);
            let verdict = verdict_for(g, &automaton);
            let report = CertaintyReport {
                recurring: verdict.recurring,
                minimal_period: verdict.minimal_period,
                state_bound: verdict.state_bound,
                tracker_states: automaton.state_count(),
                observer: format!("{mode:?}").to_lowercase(),
                construction: format!("{build:?}").to_lowercase(),
                witness: verdict.witness.as_ref().map(|w| PlayReport::lasso(g, w)),
            };
            emit(&report, json);
            Ok(verdict.recurring)
        }
        Command::Track { file, limits } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let options = limits.options();
            let arena = build_tracking_arena_with(g, &options).map_err(|e| e.to_string())?;
            let node_summaries = arena
                .nodes()
                .iter()
                .map(|n| {
                    let mut states = std::collections::BTreeMap::new();
                    for s in n.model.states() {
                        *states.entry(g.state_name(*s).to_string()).or_insert(0) += 1;
                    }
                    NodeSummary {
                        worlds: n.model.world_count(),
                        states,
                        colour: n.colour.map(|c| g.colour_name(c).to_string()),
                        certain: n.is_certain(),
                        choices: n.groups.len(),
                    }
                })
                .collect();
            let report = TrackReport {
                nodes: arena.node_count(),
                edges: arena.edge_count(),
                largest_model: arena.largest_model(),
                observable: arena.observable(),
                components: match options.components {
                    ComponentMode::AllAgents => "all",
                    ComponentMode::PlayersOnly => "players-only",
                }
                .to_string(),
                node_summaries,
            };
            emit(&report, json);
            Ok(true)
        }
        Command::Solve { file, objective, limits } => {
            let doc = load_game(file)?;
            let spec = objective_of(&doc, objective)?;
            let o =
                decide_coalition_winner(&doc.game, &spec, &limits.options()).map_err(|e| e.to_string())?;
            let report = SolveReport {
                coalition_wins: o.coalition_wins,
                arena_nodes: o.arena.node_count(),
                automaton_states: o.automaton.state_count(),
                product_nodes: o.product.game.node_count(),
                winning_nodes: o.winning_region_size(),
            };
            emit(&report, json);
            Ok(o.coalition_wins)
        }
        Command::Synth { file, output, objective, limits } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let spec = objective_of(&doc, objective)?;
            let o = decide_coalition_winner(g, &spec, &limits.options()).map_err(|e| e.to_string())?;
            if !o.coalition_wins {
                emit(&SynthReport { coalition_wins: false, output: None, machines: Vec::new() }, json);
                return Ok(false);
            }
            let machines = distribute_strategy(g, &o).map_err(|e| e.to_string())?;
            write(output, &StrategyFile::from_machines(g, &machines).to_json())?;
            let report = SynthReport {
                coalition_wins: true,
                output: Some(output.display().to_string()),
                machines: machines
                    .iter()
                    .map(|m| MachineSummary {
                        player: g.player(m.player).name.clone(),
                        states: m.state_count(),
                        transitions: m.transitions.len(),
                    })
                    .collect(),
            };
            emit(&report, json);
            Ok(true)
        }
        Command::Verify { file, strategy, objective } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let spec = objective_of(&doc, objective)?;
            let machines = load_strategy(strategy, g)?;
            let v = verify_profile(g, &spec, &machines).map_err(|e| e.to_string())?;
            let mut report = VerifyReport {
                holds: v.holds,
                configurations: v.configurations,
                counterexample: None,
                undefined: None,
            };
            match &v.failure {
                Some(Failure::Lasso(lasso)) => report.counterexample = Some(PlayReport::lasso(g, lasso)),
                Some(Failure::Undefined { history, player }) => {
                    report.undefined = Some(UndefinedReport {
                        player: g.player(*player).name.clone(),
                        history: PlayReport::history(g, history),
                    })
                }
                None => {}
            }
            emit(&report, json);
            Ok(v.holds)
        }
        Command::Simulate { file, strategy, steps, seed } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let machines = load_strategy(strategy, g)?;
            let trace = simulate(g, &machines, *steps, *seed).map_err(|e| e.to_string())?;
            let report = SimulateReport {
                seed: *seed,
                summary: trace.summary,
                play: PlayReport::history(g, &trace.play),
            };
            emit(&report, json);
            Ok(true)
        }
        Command::Dot { file, what, strategy, objective, output, limits } => {
            let doc = load_game(file)?;
            let g = &doc.game;
            let machines = || -> Result<Vec<StrategyMachine>, String> {
                let path = strategy.as_ref().ok_or("this graph needs --strategy")?;
                load_strategy(path, g)
            };
            let (kind, text) = match what {
                What::Arena => {
                    let arena = build_tracking_arena_with(g, &limits.options()).map_err(|e| e.to_string())?;
                    (DotKind::Arena, export_dot(g, DotKind::Arena, &DotArtifact::Arena(&arena)))
                }
                What::Beliefs => {
                    let automaton = build_certainty_automaton(g);
                    (DotKind::Beliefs, export_dot(g, DotKind::Beliefs, &DotArtifact::Beliefs(&automaton)))
                }
                What::Strategy => {
                    let m = machines()?;
                    (DotKind::Strategy, export_dot(g, DotKind::Strategy, &DotArtifact::Strategy(&m)))
                }
                What::VerificationProduct => {
                    let m = machines()?;
                    let spec = objective_of(&doc, objective)?;
                    let product = build_profile_product(g, &spec, &m).map_err(|e| e.to_string())?;
                    let artifact = DotArtifact::VerificationProduct(&product, &m);
                    (DotKind::VerificationProduct, export_dot(g, DotKind::VerificationProduct, &artifact))
                }
            };
            let text = text.map_err(|e| e.to_string())?;
            match output {
                Some(path) => {
                    write(path, &text)?;
                    let report = DotReport {
                        what: format!("{kind:?}").to_lowercase(),
                        output: path.display().to_string(),
                        node_lines: node_lines(&text),
                    };
                    emit(&report, json);
                }
                None => print!("{text}"),
            }
            Ok(true)
        }
    }
}
