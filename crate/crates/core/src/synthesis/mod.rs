//! Deciding the coalition game, splitting the winning strategy into
//! per-player machines, checking machines, and simulating them.

mod machine;
mod simulate;
mod solve;
mod verify;

pub use machine::{distribute_strategy, StrategyMachine};
pub use simulate::{simulate, SimulationSummary, SimulationTrace};
pub use solve::{decide_coalition_winner, Outcome};
pub use verify::{
    build_profile_product, profile_at, verify_profile, Failure, ProfileConfig, ProfileProduct,
    VerificationReport,
};
