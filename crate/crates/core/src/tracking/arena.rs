use std::collections::{HashMap, VecDeque};

use log::{debug, warn};

use crate::certainty::decide_recurring_certainty;
use crate::error::{Error, Result};
use crate::game::{ColourId, GameStructure};

use super::canonical::{canonical_form, CanonicalKey};
use super::model::{
    admissible_assignments, initial_model, model_colour, update_model_detailed, AdmissibleAssignment,
    ComponentMode, EpistemicModel,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArenaOptions {
    /// Abort once this many nodes exist.
    pub node_limit: usize,
    /// Abort once a single model has more worlds than this.
    pub world_limit: usize,
    pub components: ComponentMode,
    /// Identify isomorphic models. When off, only certain (one-world)
    /// models are shared and everything else unravels as a tree.
    pub identify_isomorphic: bool,
}

impl Default for ArenaOptions {
    fn default() -> Self {
        ArenaOptions {
            node_limit: 100_000,
            world_limit: 4096,
            components: ComponentMode::AllAgents,
            identify_isomorphic: true,
        }
    }
}

/// Successors that one admissible assignment can lead to. Assignments with
/// the same successor set are merged; `merged` counts them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeGroup {
    /// The first assignment (in enumeration order) with this successor set.
    pub assignment: AdmissibleAssignment,
    /// Sorted node indices.
    pub successors: Vec<usize>,
    /// Node of each component produced by `assignment`, in component order.
    pub targets: Vec<usize>,
    pub merged: usize,
}

#[derive(Clone, Debug)]
pub struct ArenaNode {
    pub key: CanonicalKey,
    /// The model in canonical world order.
    pub model: EpistemicModel,
    /// `None` when worlds disagree on colour.
    pub colour: Option<ColourId>,
    pub groups: Vec<EdgeGroup>,
}

impl ArenaNode {
    pub fn is_certain(&self) -> bool {
        self.model.world_count() == 1
    }
}

/// The finite game of epistemic models: the coalition picks an admissible
/// assignment, nature picks one of the resulting components.
#[derive(Clone, Debug)]
pub struct TrackingArena {
    nodes: Vec<ArenaNode>,
    index: HashMap<CanonicalKey, usize>,
    colour_count: usize,
    components: ComponentMode,
}

impl TrackingArena {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, index: usize) -> &ArenaNode {
        &self.nodes[index]
    }

    pub fn nodes(&self) -> &[ArenaNode] {
        &self.nodes
    }

    pub fn initial(&self) -> usize {
        0
    }

    /// The node with this key. Without isomorphism identification only
    /// one-world nodes are indexed.
    pub fn node_by_key(&self, key: &CanonicalKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Every node has a single colour.
    pub fn observable(&self) -> bool {
        self.nodes.iter().all(|n| n.colour.is_some())
    }

    pub fn colour_count(&self) -> usize {
        self.colour_count
    }

    pub fn components(&self) -> ComponentMode {
        self.components
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().flat_map(|n| &n.groups).map(|g| g.successors.len()).sum()
    }

    pub fn largest_model(&self) -> usize {
        self.nodes.iter().map(|n| n.model.world_count()).max().unwrap_or(0)
    }
}

pub fn build_tracking_arena(game: &GameStructure, node_limit: usize) -> Result<TrackingArena> {
    build_tracking_arena_with(game, &ArenaOptions { node_limit, ..ArenaOptions::default() })
}

/// Breadth-first exploration from the initial model, identifying models up
/// to isomorphism.
pub fn build_tracking_arena_with(game: &GameStructure, options: &ArenaOptions) -> Result<TrackingArena> {
    if !decide_recurring_certainty(game).recurring {
        warn!("game lacks recurring certainty; the tracking construction may not terminate");
    }
    let mut arena = TrackingArena {
        nodes: Vec::new(),
        index: HashMap::new(),
        colour_count: game.colour_count(),
        components: options.components,
    };
    let mut queue = VecDeque::new();
    let mut largest = 0;
    intern(game, &mut arena, &mut queue, &initial_model(game), options.identify_isomorphic);

    while let Some(current) = queue.pop_front() {
        let model = arena.nodes[current].model.clone();
        let mut groups: Vec<EdgeGroup> = Vec::new();
        for assignment in admissible_assignments(game, &model) {
            let update = update_model_detailed(game, &model, &assignment, options.components);
            let mut targets = Vec::with_capacity(update.components.len());
            for component in &update.components {
                largest = largest.max(component.world_count());
                if component.world_count() > options.world_limit {
                    return Err(Error::WorldLimit {
                        nodes: arena.nodes.len(),
                        worlds: component.world_count(),
                    });
                }
                targets.push(intern(game, &mut arena, &mut queue, component, options.identify_isomorphic));
                if arena.nodes.len() > options.node_limit {
                    return Err(Error::NodeLimit { nodes: arena.nodes.len(), largest_model: largest });
                }
            }
            let mut successors = targets.clone();
            successors.sort_unstable();
            successors.dedup();
            match groups.iter_mut().find(|g| g.successors == successors) {
                Some(g) => g.merged += 1,
                None => groups.push(EdgeGroup { assignment, successors, targets, merged: 1 }),
            }
        }
        arena.nodes[current].groups = groups;
    }
    debug!(
        "tracking arena: {} nodes, {} edges, largest model {} worlds",
        arena.node_count(),
        arena.edge_count(),
        arena.largest_model()
    );
    Ok(arena)
}

fn intern(
    game: &GameStructure,
    arena: &mut TrackingArena,
    queue: &mut VecDeque<usize>,
    model: &EpistemicModel,
    identify: bool,
) -> usize {
    let form = canonical_form(model);
    let shared = identify || model.world_count() == 1;
    if shared {
        if let Some(&i) = arena.index.get(&form.key) {
            return i;
        }
    }
    let i = arena.nodes.len();
    if shared {
        arena.index.insert(form.key.clone(), i);
    }
    arena.nodes.push(ArenaNode {
        key: form.key,
        colour: model_colour(game, &form.model).ok(),
        model: form.model,
        groups: Vec::new(),
    });
    queue.push_back(i);
    i
}
