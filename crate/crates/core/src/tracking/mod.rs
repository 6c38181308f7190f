//! Epistemic models of the players' knowledge, their update by one round of
//! play, and the finite arena obtained by identifying isomorphic models.

mod arena;
mod canonical;
mod model;

pub use arena::{
    build_tracking_arena, build_tracking_arena_with, ArenaNode, ArenaOptions, EdgeGroup, TrackingArena,
};
pub use canonical::{canonical_form, canonical_key, CanonicalForm, CanonicalKey};
pub use model::{
    admissible_assignments, assignment_count, certainty_collapse, initial_model, model_colour, state_support,
    update_model, update_model_detailed, AdmissibleAssignment, ComponentMode, EpistemicModel, Update,
};
