use log::info;

use crate::error::{Error, Result};
use crate::game::GameStructure;
use crate::objective::{
    build_parity_game, check_observability, compile_objective, ObjectiveSpec, ParityAutomaton, ProductGame,
};
use crate::parity::{solve_parity, Owner, ParitySolution};
use crate::tracking::{build_tracking_arena_with, ArenaOptions, TrackingArena};

/// Everything computed on the way to deciding the coalition game.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub coalition_wins: bool,
    pub arena: TrackingArena,
    pub automaton: ParityAutomaton,
    pub product: ProductGame,
    pub solution: ParitySolution,
}

impl Outcome {
    pub fn winning_region_size(&self) -> usize {
        self.solution.region(Owner::Coalition).len()
    }
}

/// Decides whether the players have a joint observation-based strategy
/// ensuring `objective`, by solving the parity game of the tracking arena.
pub fn decide_coalition_winner(
    game: &GameStructure,
    objective: &ObjectiveSpec,
    options: &ArenaOptions,
) -> Result<Outcome> {
    if let Err(violations) = check_observability(game) {
        let (player, a, b) = violations[0];
        return Err(Error::Observability(format!(
            "player `{}` cannot tell {} from {} but their colours differ",
            game.player(player).name,
            game.state_name(a),
            game.state_name(b)
        )));
    }
    let automaton = compile_objective(objective, game.colour_names())?;
    let arena = build_tracking_arena_with(game, options)?;
    let product = build_parity_game(&arena, &automaton)?;
    let solution = solve_parity(&product.game);
    let coalition_wins = solution.winner[product.game.initial()] == Owner::Coalition;
    info!(
        "arena {} nodes, parity game {} nodes, coalition {}",
        arena.node_count(),
        product.game.node_count(),
        if coalition_wins { "wins" } else { "loses" }
    );
    Ok(Outcome { coalition_wins, arena, automaton, product, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn solve(g: &GameStructure, spec: &ObjectiveSpec) -> bool {
        decide_coalition_winner(g, spec, &ArenaOptions::default()).unwrap().coalition_wins
    }

    #[test]
    fn fixture_outcomes() {
        assert!(solve(&fixtures::e1(), &ObjectiveSpec::buchi(&["0"])));
        assert!(!solve(&fixtures::e4(), &ObjectiveSpec::buchi(&["0"])));
        assert!(solve(&fixtures::e5(), &ObjectiveSpec::buchi(&["0"])));
    }

    #[test]
    fn e1_product_has_four_coalition_nodes() {
        let o =
            decide_coalition_winner(&fixtures::e1(), &ObjectiveSpec::buchi(&["0"]), &ArenaOptions::default())
                .unwrap();
        assert_eq!(o.product.model_node_count(), 4);
    }

    #[test]
    fn objectives_over_e1() {
        let g = fixtures::e1();
        assert!(solve(&g, &ObjectiveSpec::reachability(&["0"])));
        assert!(solve(&g, &ObjectiveSpec::safety(&["0"])));
        assert!(solve(&g, &ObjectiveSpec::cobuchi(&["0"])));
        // s0 recurs whatever the player does
        assert!(!solve(&g, &ObjectiveSpec::cobuchi(&["1"])));
    }

    #[test]
    fn unobservable_colouring_is_rejected() {
        let g = crate::game::GameBuilder::new()
            .states(["s", "p", "q"])
            .player("1", ["a"], [("s", "s"), ("p", "x"), ("q", "x")])
            .any_move("s", "p")
            .any_move("s", "q")
            .any_move("p", "s")
            .any_move("q", "s")
            .colour("s", "0")
            .colour("p", "0")
            .colour("q", "1")
            .build()
            .unwrap();
        let err =
            decide_coalition_winner(&g, &ObjectiveSpec::buchi(&["0"]), &ArenaOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Observability(_)));
    }
}
