//! Brute-force oracles and random instance generators. Nothing here calls
//! into the library's certainty, tracking or solving code; the oracles work
//! from the game's move relation and observation tables only.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use cgsynth_core::game::{ActionProfile, GameBuilder, GameStructure, History, StateId};
use cgsynth_core::parity::{Owner, ParityGame};
use cgsynth_core::synthesis::StrategyMachine;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid game: `states` states, `players` players with up to
/// `max_actions` actions, observation symbols from a small alphabet, one or
/// two successors per (state, profile). Colours are constant on the
/// oracle's agent-0 classes, so the colouring is observable.
pub fn random_game(r: &mut ChaCha8Rng, states: usize, players: usize, max_actions: usize) -> GameStructure {
    let names: Vec<String> = (0..states).map(|i| format!("v{i}")).collect();
    let mut b = GameBuilder::new().states(names.iter().cloned());
    let mut obs_tables = Vec::new();
    let mut action_counts = Vec::new();
    for p in 0..players {
        let actions = r.gen_range(1..=max_actions);
        action_counts.push(actions);
        let alphabet = r.gen_range(1..=states);
        let table: Vec<usize> = (0..states).map(|_| r.gen_range(0..alphabet)).collect();
        obs_tables.push(table.clone());
        b = b.player(
            &format!("p{p}"),
            (0..actions).map(|a| format!("a{a}")),
            names.iter().zip(&table).map(|(s, o)| (s.clone(), format!("o{o}"))),
        );
    }
    for s in 0..states {
        for profile in all_profiles(&action_counts) {
            let k = r.gen_range(1..=2);
            for _ in 0..k {
                let t = r.gen_range(0..states);
                b = b.moves(&names[s], profile.iter().map(|a| format!("a{a}")), &names[t]);
            }
        }
    }
    let classes = agent0_classes(states, &obs_tables);
    let palette = r.gen_range(1..=2);
    let colour_of: Vec<usize> = (0..states).map(|_| r.gen_range(0..palette)).collect();
    for s in 0..states {
        b = b.colour(&names[s], &format!("c{}", colour_of[classes[s]]));
    }
    b.build_validated().expect("generated games are valid")
}

/// Random game in which every cycle passes through a state that every player
/// observes uniquely: edges between the other states only go forward.
pub fn perfect_information_cycle_game(r: &mut ChaCha8Rng) -> GameStructure {
    let hubs = r.gen_range(1..=2);
    let others = r.gen_range(1..=3);
    let players = r.gen_range(1..=2);
    let hub = |i: usize| format!("h{i}");
    let other = |i: usize| format!("w{i}");
    let names: Vec<String> = (0..hubs).map(hub).chain((0..others).map(other)).collect();
    let mut b = GameBuilder::new().states(names.iter().cloned());
    let mut action_counts = Vec::new();
    for p in 0..players {
        let actions = r.gen_range(1..=2);
        action_counts.push(actions);
        let obs: Vec<(String, String)> = names
            .iter()
            .map(|s| {
                let sym = if s.starts_with('h') { s.clone() } else { format!("w{}", r.gen_range(0..2)) };
                (s.clone(), sym)
            })
            .collect();
        b = b.player(&format!("p{p}"), (0..actions).map(|a| format!("a{a}")), obs);
    }
    for profile in all_profiles(&action_counts) {
        let labels: Vec<String> = profile.iter().map(|a| format!("a{a}")).collect();
        for h in 0..hubs {
            for _ in 0..r.gen_range(1..=2) {
                let t = r.gen_range(0..names.len());
                b = b.moves(&hub(h), labels.iter().cloned(), &names[t]);
            }
        }
        for w in 0..others {
            for _ in 0..r.gen_range(1..=2) {
                // forward to a later non-hub state, or into a hub
                let forward = others - w - 1;
                let choice = r.gen_range(0..(forward + hubs));
                let t = if choice < forward { other(w + 1 + choice) } else { hub(choice - forward) };
                b = b.moves(&other(w), labels.iter().cloned(), &t);
            }
        }
    }
    b.build_validated().expect("generated games are valid")
}

pub fn all_profiles(action_counts: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &n in action_counts {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..n).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// Agent-0 classes via repeated merging until stable (deliberately not
/// union-find): class label = least state index in the class.
pub fn agent0_classes(states: usize, obs_tables: &[Vec<usize>]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..states).collect();
    loop {
        let mut changed = false;
        for u in 0..states {
            for v in 0..states {
                let confused = obs_tables.iter().any(|t| t[u] == t[v]);
                if confused && label[u] != label[v] {
                    let m = label[u].min(label[v]);
                    let old = label[u].max(label[v]);
                    for l in label.iter_mut() {
                        if *l == old {
                            *l = m;
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

pub fn obs_tables(g: &GameStructure) -> Vec<Vec<usize>> {
    (0..g.player_count()).map(|i| g.states().map(|v| g.observation(i, v)).collect()).collect()
}

pub fn oracle_agent0(g: &GameStructure) -> Vec<usize> {
    agent0_classes(g.state_count(), &obs_tables(g))
}

/// `edges[u]` = states reachable from `u` in one round under some profile.
pub fn one_step(g: &GameStructure) -> Vec<BTreeSet<usize>> {
    let mut edges = vec![BTreeSet::new(); g.state_count()];
    for (u, _, v) in g.moves() {
        edges[u.0].insert(v.0);
    }
    edges
}

/// Every realisable state sequence with `rounds` rounds.
pub fn state_sequences(g: &GameStructure, rounds: usize) -> Vec<Vec<usize>> {
    let edges = one_step(g);
    let mut layer = vec![vec![g.initial().0]];
    for _ in 0..rounds {
        layer = layer
            .into_iter()
            .flat_map(|seq| {
                let last = *seq.last().unwrap();
                edges[last].iter().map(move |&v| {
                    let mut s = seq.clone();
                    s.push(v);
                    s
                })
            })
            .collect();
    }
    layer
}

/// A history with the given state sequence, using the least profile that
/// realises each step.
pub fn history_of(g: &GameStructure, seq: &[usize]) -> History {
    let mut h = History::new(StateId(seq[0]));
    for w in seq.windows(2) {
        let (_, p, _) = g
            .moves()
            .filter(|(u, _, v)| u.0 == w[0] && v.0 == w[1])
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("step is realisable");
        h.push(p.clone(), StateId(w[1]));
    }
    h
}

/// The definition: a history attains certainty iff every equal-length history
/// agent 0 cannot tell apart ends in the same state. Returns one verdict per
/// realisable state sequence of length `rounds`.
pub fn brute_force_certainty(g: &GameStructure, rounds: usize) -> Vec<(Vec<usize>, bool)> {
    let classes = oracle_agent0(g);
    let seqs = state_sequences(g, rounds);
    let mut ends: HashMap<Vec<usize>, BTreeSet<usize>> = HashMap::new();
    for s in &seqs {
        let key: Vec<usize> = s.iter().map(|&v| classes[v]).collect();
        ends.entry(key).or_default().insert(*s.last().unwrap());
    }
    seqs.into_iter()
        .map(|s| {
            let key: Vec<usize> = s.iter().map(|&v| classes[v]).collect();
            let certain = ends[&key].len() == 1;
            (s, certain)
        })
        .collect()
}

/// Oracle belief update.
pub fn belief_step(
    edges: &[BTreeSet<usize>],
    classes: &[usize],
    belief: &BTreeSet<usize>,
    to: usize,
) -> BTreeSet<usize> {
    belief.iter().flat_map(|&u| edges[u].iter().copied()).filter(|&v| classes[v] == classes[to]).collect()
}

/// Exhaustive exploration of (state, belief, current uncertain run) to
/// `depth` rounds. Returns the lengths of all completed uncertain runs and
/// the longest run still open at the horizon.
pub fn certainty_gaps(g: &GameStructure, depth: usize) -> (BTreeSet<usize>, usize) {
    let edges = one_step(g);
    let classes = oracle_agent0(g);
    let start = (g.initial().0, BTreeSet::from([g.initial().0]), 0usize);
    let mut layer: BTreeSet<(usize, BTreeSet<usize>, usize)> = BTreeSet::from([start]);
    let mut completed = BTreeSet::new();
    let mut open = 0;
    for _ in 0..depth {
        let mut next = BTreeSet::new();
        for (v, belief, run) in &layer {
            for &w in &edges[*v] {
                let b = belief_step(&edges, &classes, belief, w);
                if b.len() == 1 {
                    if *run > 0 {
                        completed.insert(*run);
                    }
                    next.insert((w, b, 0));
                } else {
                    next.insert((w, b, run + 1));
                }
            }
        }
        layer = next;
    }
    for (_, _, run) in &layer {
        open = open.max(*run);
    }
    (completed, open)
}

/// Random parity game with every node having 1..=max_out successors.
pub fn random_parity_game(
    r: &mut ChaCha8Rng,
    max_nodes: usize,
    max_priority: u32,
    max_out: usize,
) -> ParityGame {
    let n = r.gen_range(1..=max_nodes);
    let owner = (0..n).map(|_| if r.gen_bool(0.5) { Owner::Coalition } else { Owner::Nature }).collect();
    let priority = (0..n).map(|_| r.gen_range(0..=max_priority)).collect();
    let successors = (0..n)
        .map(|_| {
            let k = r.gen_range(1..=max_out);
            (0..k).map(|_| r.gen_range(0..n)).collect()
        })
        .collect();
    ParityGame::new(owner, priority, successors, 0).expect("random games are well formed")
}

/// Winner of every node by enumerating all positional strategy pairs: the
/// coalition wins from `v` iff some coalition choice beats every nature
/// choice on the resulting lasso.
pub fn brute_force_parity(game: &ParityGame) -> Vec<Owner> {
    let n = game.node_count();
    let coalition: Vec<usize> = (0..n).filter(|&v| game.owner(v) == Owner::Coalition).collect();
    let nature: Vec<usize> = (0..n).filter(|&v| game.owner(v) == Owner::Nature).collect();
    let choices = |nodes: &[usize]| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for &v in nodes {
            out = out
                .into_iter()
                .flat_map(|c: Vec<usize>| {
                    game.successors(v).iter().map(move |&s| {
                        let mut d = c.clone();
                        d.push(s);
                        d
                    })
                })
                .collect();
        }
        out
    };
    let sigmas = choices(&coalition);
    let taus = choices(&nature);
    let mut wins = vec![false; n];
    for sigma in &sigmas {
        let mut beaten = vec![false; n];
        for tau in &taus {
            let mut next = vec![0; n];
            for (i, &v) in coalition.iter().enumerate() {
                next[v] = sigma[i];
            }
            for (i, &v) in nature.iter().enumerate() {
                next[v] = tau[i];
            }
            for (v, lost) in beaten.iter_mut().enumerate() {
                if !*lost && lasso_min_priority(game, &next, v) % 2 == 1 {
                    *lost = true;
                }
            }
        }
        for v in 0..n {
            if !beaten[v] {
                wins[v] = true;
            }
        }
    }
    wins.into_iter().map(|w| if w { Owner::Coalition } else { Owner::Nature }).collect()
}

fn lasso_min_priority(game: &ParityGame, next: &[usize], start: usize) -> u32 {
    let mut seen = vec![usize::MAX; next.len()];
    let mut path = Vec::new();
    let mut v = start;
    while seen[v] == usize::MAX {
        seen[v] = path.len();
        path.push(v);
        v = next[v];
    }
    path[seen[v]..].iter().map(|&u| game.priority(u)).min().unwrap()
}

/// One world of an explicitly unravelled model: the state sequence and
/// profiles since the model's root.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct World {
    pub states: Vec<usize>,
    pub profiles: Vec<Vec<usize>>,
}

/// Indistinguishability straight from the definition.
pub fn related(g: &GameStructure, classes0: &[usize], slot: usize, a: &World, b: &World) -> bool {
    if a.states.len() != b.states.len() {
        return false;
    }
    if slot == 0 {
        return a.states.iter().zip(&b.states).all(|(&x, &y)| classes0[x] == classes0[y]);
    }
    let i = slot - 1;
    a.states
        .iter()
        .zip(&b.states)
        .all(|(&x, &y)| g.observation(i, StateId(x)) == g.observation(i, StateId(y)))
        && a.profiles.iter().zip(&b.profiles).all(|(p, q)| p[i] == q[i])
}

/// A model given by its worlds; relations are recomputed on demand.
pub type ExplicitModel = Vec<World>;

fn relation_matrix(g: &GameStructure, classes0: &[usize], m: &ExplicitModel) -> Vec<Vec<Vec<bool>>> {
    (0..=g.player_count())
        .map(|slot| m.iter().map(|a| m.iter().map(|b| related(g, classes0, slot, a, b)).collect()).collect())
        .collect()
}

/// Isomorphism by trying every bijection.
pub fn isomorphic(g: &GameStructure, classes0: &[usize], a: &ExplicitModel, b: &ExplicitModel) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let ra = relation_matrix(g, classes0, a);
    let rb = relation_matrix(g, classes0, b);
    let last = |m: &ExplicitModel, w: usize| *m[w].states.last().unwrap();
    let n = a.len();
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn extend(perm: &mut Vec<usize>, used: &mut [bool], ok: &dyn Fn(&[usize]) -> bool, n: usize) -> bool {
        if perm.len() == n {
            return true;
        }
        for j in 0..n {
            if !used[j] {
                perm.push(j);
                used[j] = true;
                if ok(perm) && extend(perm, used, ok, n) {
                    return true;
                }
                used[j] = false;
                perm.pop();
            }
        }
        false
    }
    let ok = |p: &[usize]| {
        let k = p.len() - 1;
        last(a, k) == last(b, p[k])
            && (0..=k).all(|x| {
                (0..ra.len()).all(|s| ra[s][x][k] == rb[s][p[x]][p[k]] && ra[s][k][x] == rb[s][p[k]][p[x]])
            })
    };
    extend(&mut perm, &mut used, &ok, n)
}

/// Admissible assignments of an explicit model: one action per player per
/// class of that player.
pub fn explicit_assignments(
    g: &GameStructure,
    classes0: &[usize],
    m: &ExplicitModel,
) -> Vec<Vec<Vec<usize>>> {
    let n = m.len();
    let mut class_of = vec![vec![0; n]; g.player_count()];
    let mut class_count = vec![0; g.player_count()];
    for i in 0..g.player_count() {
        let mut reps: Vec<usize> = Vec::new();
        for w in 0..n {
            match reps.iter().position(|&r| related(g, classes0, i + 1, &m[r], &m[w])) {
                Some(c) => class_of[i][w] = c,
                None => {
                    class_of[i][w] = reps.len();
                    reps.push(w);
                }
            }
        }
        class_count[i] = reps.len();
    }
    let digits: Vec<usize> = (0..g.player_count())
        .flat_map(|i| std::iter::repeat_n(g.player(i).actions.len(), class_count[i]))
        .collect();
    all_profiles(&digits)
        .into_iter()
        .map(|choice| {
            (0..n)
                .map(|w| {
                    let mut offset = 0;
                    (0..g.player_count())
                        .map(|i| {
                            let a = choice[offset + class_of[i][w]];
                            offset += class_count[i];
                            a
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Successor models: extend every world, split into components of the union
/// of all relations, and (if `collapse`) replace components that end in a
/// single state by a fresh one-world model.
pub fn explicit_update(
    g: &GameStructure,
    classes0: &[usize],
    m: &ExplicitModel,
    assignment: &[Vec<usize>],
    collapse: bool,
) -> Vec<ExplicitModel> {
    let mut children: Vec<World> = Vec::new();
    for (w, world) in m.iter().enumerate() {
        let last = *world.states.last().unwrap();
        for &v in g.successors(StateId(last), &ActionProfile(assignment[w].clone())) {
            let mut c = world.clone();
            c.states.push(v.0);
            c.profiles.push(assignment[w].clone());
            children.push(c);
        }
    }
    let k = children.len();
    let mut component = vec![usize::MAX; k];
    let mut out = Vec::new();
    for start in 0..k {
        if component[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([start]);
        component[start] = id;
        while let Some(x) = queue.pop_front() {
            members.push(children[x].clone());
            for y in 0..k {
                if component[y] == usize::MAX
                    && (0..=g.player_count()).any(|s| related(g, classes0, s, &children[x], &children[y]))
                {
                    component[y] = id;
                    queue.push_back(y);
                }
            }
        }
        let ends: BTreeSet<usize> = members.iter().map(|w| *w.states.last().unwrap()).collect();
        if collapse && ends.len() == 1 {
            let v = *ends.iter().next().unwrap();
            out.push(vec![World { states: vec![v], profiles: Vec::new() }]);
        } else {
            out.push(members);
        }
    }
    out
}

/// Models reachable from the initial one, identified up to isomorphism by
/// brute force. `None` once more than `limit` models are found.
pub fn explicit_models(g: &GameStructure, limit: usize) -> Option<Vec<ExplicitModel>> {
    let classes0 = oracle_agent0(g);
    let mut models: Vec<ExplicitModel> =
        vec![vec![World { states: vec![g.initial().0], profiles: Vec::new() }]];
    let mut head = 0;
    while head < models.len() {
        let m = models[head].clone();
        head += 1;
        for f in explicit_assignments(g, &classes0, &m) {
            for next in explicit_update(g, &classes0, &m, &f, true) {
                if !models.iter().any(|x| isomorphic(g, &classes0, x, &next)) {
                    models.push(next);
                    if models.len() > limit {
                        return None;
                    }
                }
            }
        }
    }
    Some(models)
}

/// Multiset of last states, for matching explicit models to arena nodes.
pub fn end_states(m: &ExplicitModel) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for w in m {
        *out.entry(*w.states.last().unwrap()).or_insert(0) += 1;
    }
    out
}

/// Recurring-certainty game with richer knowledge: perfect-information hubs
/// feeding up to three layers of partially observed states, each layer
/// moving forward or back to a hub depending on the profile. Layer states
/// share one colour; hubs get their own.
pub fn layered_game(r: &mut ChaCha8Rng) -> GameStructure {
    let hubs = r.gen_range(1..=2);
    let depth = r.gen_range(1..=3);
    let width: Vec<usize> = (0..depth).map(|_| r.gen_range(2..=3)).collect();
    let players = r.gen_range(1..=2);
    let hub = |i: usize| format!("h{i}");
    let cell = |l: usize, k: usize| format!("l{l}s{k}");
    let mut names: Vec<String> = (0..hubs).map(hub).collect();
    for (l, &w) in width.iter().enumerate() {
        names.extend((0..w).map(|k| cell(l, k)));
    }
    let mut b = GameBuilder::new().states(names.iter().cloned());
    let mut action_counts = Vec::new();
    for p in 0..players {
        let actions = r.gen_range(1..=2);
        action_counts.push(actions);
        let obs: Vec<(String, String)> = names
            .iter()
            .map(|s| {
                let sym = match s.strip_prefix('l') {
                    Some(rest) => format!("L{}o{}", &rest[..1], r.gen_range(0..2)),
                    None => s.clone(),
                };
                (s.clone(), sym)
            })
            .collect();
        b = b.player(&format!("p{p}"), (0..actions).map(|a| format!("a{a}")), obs);
    }
    for profile in all_profiles(&action_counts) {
        let labels: Vec<String> = profile.iter().map(|a| format!("a{a}")).collect();
        for h in 0..hubs {
            for _ in 0..r.gen_range(1..=2) {
                let target = if r.gen_bool(0.8) {
                    cell(0, r.gen_range(0..width[0]))
                } else {
                    hub(r.gen_range(0..hubs))
                };
                b = b.moves(&hub(h), labels.iter().cloned(), &target);
            }
        }
        for l in 0..depth {
            for k in 0..width[l] {
                for _ in 0..r.gen_range(1..=2) {
                    let target = if l + 1 < depth && r.gen_bool(0.7) {
                        cell(l + 1, r.gen_range(0..width[l + 1]))
                    } else {
                        hub(r.gen_range(0..hubs))
                    };
                    b = b.moves(&cell(l, k), labels.iter().cloned(), &target);
                }
            }
        }
    }
    for s in &names {
        let colour = if s.starts_with('h') { format!("c{}", r.gen_range(0..2)) } else { "c1".to_string() };
        b = b.colour(s, &colour);
    }
    b.build_validated().expect("generated games are valid")
}

/// Strategy of every player as one action per observation symbol.
pub type MemorylessProfile = Vec<Vec<usize>>;

/// States reachable from the initial state when everyone follows `profile`.
fn reachable_under(g: &GameStructure, tables: &[Vec<usize>], profile: &MemorylessProfile) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); g.state_count()];
    for u in g.states() {
        let p = ActionProfile((0..tables.len()).map(|i| profile[i][tables[i][u.0]]).collect());
        succ[u.0] = g.successors(u, &p).iter().map(|s| s.0).collect();
    }
    succ
}

/// Does every play under `profile` visit `targets` infinitely often? Checked
/// as: no reachable cycle avoids the targets.
pub fn memoryless_profile_wins_buchi(
    g: &GameStructure,
    profile: &MemorylessProfile,
    targets: &BTreeSet<usize>,
) -> bool {
    let tables = obs_tables(g);
    let succ = reachable_under(g, &tables, profile);
    let mut reach = vec![false; g.state_count()];
    let mut stack = vec![g.initial().0];
    reach[g.initial().0] = true;
    while let Some(u) = stack.pop() {
        for &v in &succ[u] {
            if !reach[v] {
                reach[v] = true;
                stack.push(v);
            }
        }
    }
    // repeatedly strip non-target reachable states with no non-target successor
    let mut alive: Vec<bool> = (0..g.state_count()).map(|u| reach[u] && !targets.contains(&u)).collect();
    loop {
        let mut changed = false;
        for u in 0..g.state_count() {
            if alive[u] && !succ[u].iter().any(|&v| alive[v]) {
                alive[u] = false;
                changed = true;
            }
        }
        if !changed {
            return !alive.iter().any(|&a| a);
        }
    }
}

/// Every observation-memoryless profile, as long as there are at most `cap`.
pub fn memoryless_profiles(g: &GameStructure, cap: usize) -> Option<Vec<MemorylessProfile>> {
    let tables = obs_tables(g);
    let mut count: usize = 1;
    let mut per_player = Vec::new();
    for (i, t) in tables.iter().enumerate() {
        let symbols = t.iter().max().map_or(0, |m| m + 1);
        let actions = g.player(i).actions.len();
        count = count.checked_mul(actions.checked_pow(symbols as u32)?)?;
        if count > cap {
            return None;
        }
        per_player.push((symbols, actions));
    }
    let mut out: Vec<MemorylessProfile> = vec![Vec::new()];
    for (symbols, actions) in per_player {
        let choices = all_profiles(&vec![actions; symbols]);
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
    }
    Some(out)
}

/// A memoryless winning profile for "visit `targets` infinitely often", if any.
pub fn memoryless_buchi_witness(
    g: &GameStructure,
    targets: &BTreeSet<usize>,
    cap: usize,
) -> Option<Option<MemorylessProfile>> {
    let profiles = memoryless_profiles(g, cap)?;
    Some(profiles.into_iter().find(|p| memoryless_profile_wins_buchi(g, p, targets)))
}

/// Player `i`'s view of a history: its observations and its own actions.
pub fn player_view(tables: &[Vec<usize>], i: usize, h: &History) -> (Vec<usize>, Vec<usize>) {
    (h.states().iter().map(|s| tables[i][s.0]).collect(), h.profiles().iter().map(|p| p.0[i]).collect())
}

/// Number of joint strategies, each a choice of action per reachable
/// information set, under which no history of up to `depth` rounds enters
/// `trap`. Zero means every strategy, whatever its memory, can be driven into
/// the trap within `depth` rounds.
pub fn trap_avoiding_strategies(g: &GameStructure, depth: usize, trap: &BTreeSet<usize>) -> usize {
    let tables = obs_tables(g);
    fn go(
        g: &GameStructure,
        tables: &[Vec<usize>],
        layer: Vec<History>,
        left: usize,
        trap: &BTreeSet<usize>,
    ) -> usize {
        if layer.iter().any(|h| trap.contains(&h.last().0)) {
            return 0;
        }
        if left == 0 {
            return 1;
        }
        let players = g.player_count();
        let sets: Vec<Vec<(Vec<usize>, Vec<usize>)>> = (0..players)
            .map(|i| {
                let mut views: Vec<_> = layer.iter().map(|h| player_view(tables, i, h)).collect();
                views.sort();
                views.dedup();
                views
            })
            .collect();
        // one digit per (player, information set)
        let mut radix = Vec::new();
        for (i, v) in sets.iter().enumerate() {
            radix.extend(std::iter::repeat_n(g.player(i).actions.len(), v.len()));
        }
        let mut total = 0;
        for digits in all_profiles(&radix) {
            let mut next = Vec::new();
            for h in &layer {
                let mut offset = 0;
                let mut profile = Vec::with_capacity(players);
                for (i, v) in sets.iter().enumerate() {
                    let k = v.binary_search(&player_view(tables, i, h)).unwrap();
                    profile.push(digits[offset + k]);
                    offset += v.len();
                }
                let p = ActionProfile(profile);
                for &s in g.successors(h.last(), &p) {
                    next.push(h.extended(p.clone(), s));
                }
            }
            total += go(g, tables, next, left - 1, trap);
        }
        total
    }
    go(g, &tables, vec![History::new(g.initial())], depth, trap)
}

/// Every history of up to `depth` rounds consistent with the machines,
/// paired with the machine states reached along it.
pub fn consistent_histories(
    g: &GameStructure,
    machines: &[StrategyMachine],
    depth: usize,
) -> Vec<(History, Vec<usize>)> {
    let mut layer = vec![(History::new(g.initial()), machines.iter().map(|m| m.initial).collect::<Vec<_>>())];
    let mut all = layer.clone();
    for _ in 0..depth {
        let mut next = Vec::new();
        for (h, memory) in &layer {
            let p = ActionProfile(machines.iter().zip(memory).map(|(m, &q)| m.output[q]).collect());
            for &s in g.successors(h.last(), &p) {
                let memory: Vec<usize> = machines
                    .iter()
                    .zip(memory)
                    .enumerate()
                    .map(|(i, (m, &q))| {
                        m.next(q, g.observation(i, s)).expect("machines cover consistent plays")
                    })
                    .collect();
                next.push((h.extended(p.clone(), s), memory));
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Histories a player cannot tell apart must get the same next action.
pub fn check_informational_consistency(
    g: &GameStructure,
    machines: &[StrategyMachine],
    depth: usize,
) -> Result<(), String> {
    let tables = obs_tables(g);
    for (i, m) in machines.iter().enumerate() {
        let mut seen: BTreeMap<(Vec<usize>, Vec<usize>), usize> = BTreeMap::new();
        for (h, memory) in consistent_histories(g, machines, depth) {
            let action = m.output[memory[i]];
            let view = player_view(&tables, i, &h);
            let previous = *seen.entry(view.clone()).or_insert(action);
            if previous != action {
                return Err(format!("player {i} acts differently on {view:?}"));
            }
        }
    }
    Ok(())
}
