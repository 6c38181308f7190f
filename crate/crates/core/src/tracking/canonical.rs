//! Isomorphism-invariant keys for epistemic models.
//!
//! Colour refinement followed by individualisation, keeping the least
//! encoding over all leaves of the search tree. Worlds that are
//! interchangeable by a transposition (same state and, for every agent,
//! either in the same class or both alone in their class) are explored once.

use std::collections::HashMap;

use super::model::EpistemicModel;

/// Equal for two models exactly when they are isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u32>);

impl CanonicalKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// The model renumbered into canonical world order.
    pub model: EpistemicModel,
    /// `position[w]` is the canonical index of world `w`.
    pub position: Vec<usize>,
}

pub fn canonical_key(model: &EpistemicModel) -> CanonicalKey {
    canonical_form(model).key
}

pub fn canonical_form(model: &EpistemicModel) -> CanonicalForm {
    let search = Search::new(model);
    let initial: Vec<u32> = model.states().iter().map(|s| s.0 as u32).collect();
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    search.explore(search.refine(initial), &mut best);
    let (encoding, order) = best.expect("search reaches a leaf");
    let mut position = vec![0; order.len()];
    for (p, &w) in order.iter().enumerate() {
        position[w] = p;
    }
    CanonicalForm { key: CanonicalKey(encoding), model: model.relabel(&position), position }
}

struct Search<'m> {
    model: &'m EpistemicModel,
    /// Per slot, the worlds of each class.
    classes: Vec<Vec<Vec<usize>>>,
}

fn rank<T: Ord + Clone>(items: &[T]) -> Vec<u32> {
    let mut sorted = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items.iter().map(|x| sorted.binary_search(x).unwrap() as u32).collect()
}

fn distinct(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

impl<'m> Search<'m> {
    fn new(model: &'m EpistemicModel) -> Self {
        let classes = (0..model.agent_slots())
            .map(|slot| {
                let labels = model.labels(slot);
                let count = labels.iter().max().map_or(0, |m| m + 1);
                let mut classes = vec![Vec::new(); count];
                for (w, &l) in labels.iter().enumerate() {
                    classes[l].push(w);
                }
                classes
            })
            .collect();
        Search { model, classes }
    }

    /// Refines until stable. Colours are ranks of invariant signatures, so the
    /// result does not depend on world numbering.
    fn refine(&self, mut colours: Vec<u32>) -> Vec<u32> {
        colours = rank(&colours);
        let mut count = distinct(&colours);
        loop {
            let mut class_ids: Vec<Vec<u32>> = Vec::with_capacity(self.classes.len());
            for classes in &self.classes {
                let sigs: Vec<Vec<u32>> = classes
                    .iter()
                    .map(|members| {
                        let mut s: Vec<u32> = members.iter().map(|&w| colours[w]).collect();
                        s.sort_unstable();
                        s
                    })
                    .collect();
                class_ids.push(rank(&sigs));
            }
            let world_sigs: Vec<Vec<u32>> = (0..colours.len())
                .map(|w| {
                    let mut sig = Vec::with_capacity(1 + class_ids.len());
                    sig.push(colours[w]);
                    for (slot, ids) in class_ids.iter().enumerate() {
                        sig.push(ids[self.model.labels(slot)[w]]);
                    }
                    sig
                })
                .collect();
            let next = rank(&world_sigs);
            let next_count = distinct(&next);
            colours = next;
            if next_count == count {
                return colours;
            }
            count = next_count;
        }
    }

    fn twins(&self, w: usize, v: usize) -> bool {
        self.model.state_of(w) == self.model.state_of(v)
            && (0..self.model.agent_slots()).all(|slot| {
                let labels = self.model.labels(slot);
                labels[w] == labels[v]
                    || (self.classes[slot][labels[w]].len() == 1 && self.classes[slot][labels[v]].len() == 1)
            })
    }

    /// Splits a cell into twin classes, each listed by its members.
    fn twin_classes(&self, cell: &[usize]) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &w in cell {
            match groups.iter_mut().find(|g| self.twins(g[0], w)) {
                Some(g) => g.push(w),
                None => groups.push(vec![w]),
            }
        }
        groups
    }

    fn cells(colours: &[u32]) -> Vec<Vec<usize>> {
        let mut by: HashMap<u32, Vec<usize>> = HashMap::new();
        for (w, &c) in colours.iter().enumerate() {
            by.entry(c).or_default().push(w);
        }
        let mut cells: Vec<(u32, Vec<usize>)> = by.into_iter().collect();
        cells.sort_unstable_by_key(|(c, _)| *c);
        cells.into_iter().map(|(_, ws)| ws).collect()
    }

    fn explore(&self, colours: Vec<u32>, best: &mut Option<(Vec<u32>, Vec<usize>)>) {
        let cells = Self::cells(&colours);
        let open: Vec<&Vec<usize>> = cells.iter().filter(|c| c.len() > 1).collect();
        // Interchangeable worlds only: every completion is equivalent.
        if open.iter().all(|c| self.twin_classes(c).len() == 1) {
            let order: Vec<usize> = cells.into_iter().flatten().collect();
            let encoding = self.encode(&order);
            if best.as_ref().is_none_or(|(b, _)| encoding < *b) {
                *best = Some((encoding, order));
            }
            return;
        }
        let target = open[0];
        for group in self.twin_classes(target) {
            let chosen = group[0];
            let split: Vec<u32> = colours
                .iter()
                .enumerate()
                .map(|(w, &c)| {
                    let demoted = colours[w] == colours[chosen] && w != chosen;
                    2 * c + u32::from(demoted)
                })
                .collect();
            self.explore(self.refine(split), best);
        }
    }

    /// World count, slot count, states in order, then each slot's labels
    /// renumbered by first occurrence along the order.
    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = order.len();
        let slots = self.model.agent_slots();
        let mut out = Vec::with_capacity(2 + n * (slots + 1));
        out.push(n as u32);
        out.push(slots as u32);
        out.extend(order.iter().map(|&w| self.model.state_of(w).0 as u32));
        for slot in 0..slots {
            let labels = self.model.labels(slot);
            let mut ids: HashMap<usize, u32> = HashMap::new();
            for &w in order {
                let next = ids.len() as u32;
                out.push(*ids.entry(labels[w]).or_insert(next));
            }
        }
        out
    }
}
