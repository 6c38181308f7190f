//! Two-player parity games under the min-even convention and a recursive
//! attractor-decomposition solver with positional strategies.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Owner {
    /// The grand coalition; wins when the least recurring priority is even.
    Coalition,
    Nature,
}

impl Owner {
    pub fn opponent(self) -> Owner {
        match self {
            Owner::Coalition => Owner::Nature,
            Owner::Nature => Owner::Coalition,
        }
    }

    fn of_priority(priority: u32) -> Owner {
        if priority.is_multiple_of(2) {
            Owner::Coalition
        } else {
            Owner::Nature
        }
    }

    fn index(self) -> usize {
        match self {
            Owner::Coalition => 0,
            Owner::Nature => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Owner>,
    priority: Vec<u32>,
    successors: Vec<Vec<usize>>,
    initial: usize,
}

impl ParityGame {
    /// Successor lists are sorted and deduplicated. Every node needs a successor.
    pub fn new(
        owner: Vec<Owner>,
        priority: Vec<u32>,
        mut successors: Vec<Vec<usize>>,
        initial: usize,
    ) -> Result<Self> {
        let n = owner.len();
        if priority.len() != n || successors.len() != n || initial >= n {
            return Err(Error::Format("parity game tables disagree in size".into()));
        }
        for (node, succ) in successors.iter_mut().enumerate() {
            succ.sort_unstable();
            succ.dedup();
            if succ.is_empty() {
                return Err(Error::Format(format!("parity game node {node} has no successor")));
            }
            if succ.iter().any(|&s| s >= n) {
                return Err(Error::Format(format!("parity game node {node} has a dangling edge")));
            }
        }
        Ok(ParityGame { owner, priority, successors, initial })
    }

    pub fn node_count(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, node: usize) -> Owner {
        self.owner[node]
    }

    pub fn priority(&self, node: usize) -> u32 {
        self.priority[node]
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.successors[node]
    }

    pub fn all_successors(&self) -> &[Vec<usize>] {
        &self.successors
    }

    pub fn initial(&self) -> usize {
        self.initial
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySolution {
    pub winner: Vec<Owner>,
    /// One successor per coalition node in the coalition's region.
    pub coalition_strategy: BTreeMap<usize, usize>,
    /// One successor per nature node in nature's region.
    pub nature_strategy: BTreeMap<usize, usize>,
}

impl ParitySolution {
    pub fn region(&self, owner: Owner) -> Vec<usize> {
        (0..self.winner.len()).filter(|&v| self.winner[v] == owner).collect()
    }

    pub fn strategy(&self, owner: Owner) -> &BTreeMap<usize, usize> {
        match owner {
            Owner::Coalition => &self.coalition_strategy,
            Owner::Nature => &self.nature_strategy,
        }
    }
}

/// Solves `game` exactly; both regions come with positional winning strategies.
pub fn solve_parity(game: &ParityGame) -> ParitySolution {
    let mut solver = Zielonka { game };
    let all = vec![true; game.node_count()];
    let solved = solver.solve(&all);
    let mut solution = ParitySolution {
        winner: (0..game.node_count())
            .map(|v| if solved.regions[0][v] { Owner::Coalition } else { Owner::Nature })
            .collect(),
        coalition_strategy: BTreeMap::new(),
        nature_strategy: BTreeMap::new(),
    };
    for (v, choice) in solved.strategy.iter().enumerate() {
        if let Some(next) = *choice {
            match game.owner(v) {
                Owner::Coalition => solution.coalition_strategy.insert(v, next),
                Owner::Nature => solution.nature_strategy.insert(v, next),
            };
        }
    }
    debug_assert_eq!(check_solution(game, &solution), Ok(()));
    solution
}

/// Checks a claimed solution: regions are traps for the loser, strategies stay
/// in their region, and every cycle consistent with a winner's strategy has a
/// least priority of the winner's parity.
pub fn check_solution(game: &ParityGame, solution: &ParitySolution) -> Result<(), String> {
    let n = game.node_count();
    if solution.winner.len() != n {
        return Err("winner table has the wrong size".into());
    }
    for owner in [Owner::Coalition, Owner::Nature] {
        let inside: Vec<bool> = (0..n).map(|v| solution.winner[v] == owner).collect();
        let strategy = solution.strategy(owner);
        let mut restricted = vec![Vec::new(); n];
        for v in (0..n).filter(|&v| inside[v]) {
            if game.owner(v) == owner {
                let Some(&next) = strategy.get(&v) else {
                    return Err(format!("{owner:?} has no move at node {v}"));
                };
                if !game.successors(v).contains(&next) || !inside[next] {
                    return Err(format!("{owner:?} strategy leaves its region at node {v}"));
                }
                restricted[v] = vec![next];
            } else {
                if game.successors(v).iter().any(|&w| !inside[w]) {
                    return Err(format!("{owner:?} region is not a trap at node {v}"));
                }
                restricted[v] = game.successors(v).to_vec();
            }
        }
        let losing_parity = owner.opponent().index() as u32;
        if let Some(cycle) =
            graph::cycle_with_least_priority_parity(&restricted, &inside, game.priorities(), losing_parity)
        {
            return Err(format!("{owner:?} strategy admits a losing cycle {cycle:?}"));
        }
    }
    Ok(())
}

struct Solved {
    regions: [Vec<bool>; 2],
    strategy: Vec<Option<usize>>,
}

struct Zielonka<'a> {
    game: &'a ParityGame,
}

impl Zielonka<'_> {
    fn solve(&mut self, subgame: &[bool]) -> Solved {
        let n = self.game.node_count();
        let mut solved = Solved { regions: [vec![false; n], vec![false; n]], strategy: vec![None; n] };
        let Some(least) = (0..n).filter(|&v| subgame[v]).map(|v| self.game.priority(v)).min() else {
            return solved;
        };
        let alpha = Owner::of_priority(least);
        let target: Vec<bool> = (0..n).map(|v| subgame[v] && self.game.priority(v) == least).collect();
        let (attracted, attractor_moves) = self.attractor(alpha, subgame, &target);
        let rest: Vec<bool> = (0..n).map(|v| subgame[v] && !attracted[v]).collect();
        let first = self.solve(&rest);

        if !first.regions[alpha.opponent().index()].iter().any(|&x| x) {
            solved.regions[alpha.index()] = subgame.to_vec();
            solved.strategy = first.strategy;
            for v in (0..n).filter(|&v| attracted[v] && self.game.owner(v) == alpha) {
                solved.strategy[v] = Some(match attractor_moves[v] {
                    Some(next) => next,
                    // target nodes may move anywhere inside the subgame
                    None => self.least_successor_in(v, subgame),
                });
            }
            return solved;
        }

        let opponent = alpha.opponent();
        let (escaped, escape_moves) = self.attractor(opponent, subgame, &first.regions[opponent.index()]);
        let remainder: Vec<bool> = (0..n).map(|v| subgame[v] && !escaped[v]).collect();
        let second = self.solve(&remainder);
        solved.regions[alpha.index()] = second.regions[alpha.index()].clone();
        solved.regions[opponent.index()] =
            (0..n).map(|v| escaped[v] || second.regions[opponent.index()][v]).collect();
        solved.strategy = second.strategy;
        for v in (0..n).filter(|&v| escaped[v] && self.game.owner(v) == opponent) {
            solved.strategy[v] =
                if first.regions[opponent.index()][v] { first.strategy[v] } else { escape_moves[v] };
        }
        solved
    }

    fn least_successor_in(&self, v: usize, subgame: &[bool]) -> usize {
        *self.game.successors(v).iter().find(|&&w| subgame[w]).expect("subgames are closed under some move")
    }

    /// Layered attractor of `target` for `player` inside `subgame`. Attracted
    /// nodes of `player` outside the target record the least successor in an
    /// earlier layer.
    fn attractor(&self, player: Owner, subgame: &[bool], target: &[bool]) -> (Vec<bool>, Vec<Option<usize>>) {
        let n = self.game.node_count();
        let mut attracted = target.to_vec();
        let mut moves = vec![None; n];
        loop {
            let snapshot = attracted.clone();
            let mut changed = false;
            for v in (0..n).filter(|&v| subgame[v] && !snapshot[v]) {
                let mut inner = self.game.successors(v).iter().copied().filter(|&w| subgame[w]);
                if self.game.owner(v) == player {
                    if let Some(next) = inner.find(|&w| snapshot[w]) {
                        attracted[v] = true;
                        moves[v] = Some(next);
                        changed = true;
                    }
                } else if inner.all(|w| snapshot[w]) {
                    attracted[v] = true;
                    changed = true;
                }
            }
            if !changed {
                return (attracted, moves);
            }
        }
    }
}
