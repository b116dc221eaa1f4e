mod common;

use std::sync::Arc;

use proptest::prelude::*;
use uncoupled::analysis::{build_graph, decide_success, simulate};
use uncoupled::dynamics::{
    CanonicalH, MinBestReply, PadAction, PadPlayer, QueryProtocol2, QueryProtocol3, RecallState,
    StrategyMapping, StrategyVector,
};
use uncoupled::generators::{
    count_structures, enumerate_structures, realize_game, structure_at, structure_index,
    EnumerationSpec, GameClass,
};
use uncoupled::{Game, ProfileSpace};

fn arb_counts(max_players: usize, max_actions: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2..=max_actions, 2..=max_players)
}

fn arb_game(counts: Vec<usize>, range: i64) -> impl Strategy<Value = Game> {
    let size: usize = counts.iter().product();
    let n = counts.len();
    prop::collection::vec(prop::collection::vec(-range..range, size), n).prop_map(move |payoffs| {
        Game::new(ProfileSpace::new(counts.clone()).unwrap(), payoffs).unwrap()
    })
}

fn small_game() -> impl Strategy<Value = Game> {
    arb_counts(3, 3).prop_flat_map(|c| arb_game(c, 3))
}

fn mappings(space: &ProfileSpace) -> Vec<Arc<dyn StrategyMapping>> {
    let mut out: Vec<Arc<dyn StrategyMapping>> = vec![
        Arc::new(CanonicalH),
        Arc::new(MinBestReply),
        Arc::new(QueryProtocol3),
        Arc::new(PadAction::new(Arc::new(CanonicalH), 0).unwrap()),
        Arc::new(PadPlayer::new(Arc::new(CanonicalH), 2).unwrap()),
    ];
    if QueryProtocol2.supports(space).is_ok() {
        out.push(Arc::new(QueryProtocol2));
    }
    out
}

/// Every state of the given recall, capped for long recalls.
fn states(space: &ProfileSpace, recall: usize) -> Vec<Vec<usize>> {
    let size = space.size();
    let total = size.pow(recall as u32).min(4096);
    (0..total)
        .map(|mut x| {
            let mut v = vec![0; recall];
            for s in v.iter_mut().rev() {
                *s = x % size;
                x /= size;
            }
            v
        })
        .collect()
}

fn same_strategies(f: &StrategyVector, g: &StrategyVector, players: &[usize]) -> bool {
    states(f.space(), f.recall()).iter().all(|s| {
        players
            .iter()
            .all(|&i| f.distribution_at(i, s) == g.distribution_at(i, s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn uncoupled_under_perturbation(
        game in small_game(),
        other in 0usize..3,
        seed in any::<u64>(),
    ) {
        let n = game.space().players();
        let j = other % n;
        let mut payoffs = game.payoffs().to_vec();
        let mut rng = seed;
        for u in payoffs[j].iter_mut() {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            *u = (rng >> 40) as i64 % 7 - 3;
        }
        let perturbed = Game::new(game.space().clone(), payoffs).unwrap();
        let others: Vec<usize> = (0..n).filter(|&i| i != j).collect();
        for m in mappings(game.space()) {
            let f = StrategyVector::build(m.as_ref(), &game).unwrap();
            let g = StrategyVector::build(m.as_ref(), &perturbed).unwrap();
            prop_assert!(same_strategies(&f, &g, &others), "{}", m.name());
        }
    }

    #[test]
    fn structure_determines_the_dynamics(game in small_game()) {
        let structure = game.best_reply_structure();
        let realized = realize_game(&structure);
        prop_assert_eq!(realized.best_reply_structure(), structure);
        let all: Vec<usize> = (0..game.space().players()).collect();
        for m in mappings(game.space()) {
            let f = StrategyVector::build(m.as_ref(), &game).unwrap();
            let g = StrategyVector::build(m.as_ref(), &realized).unwrap();
            prop_assert!(same_strategies(&f, &g, &all), "{}", m.name());
            if f.recall() == 1 {
                let a = build_graph(&f, &game, 1 << 16).unwrap();
                let b = build_graph(&g, &realized, 1 << 16).unwrap();
                for x in 0..a.node_count() {
                    prop_assert_eq!(a.successors(x), b.successors(x));
                    prop_assert_eq!(a.edge_weights(x), b.edge_weights(x));
                }
            }
        }
    }

    #[test]
    fn best_replies_survive_positive_affine_maps(
        game in small_game(),
        scales in prop::collection::vec(1i64..5, 3),
        shifts in prop::collection::vec(-10i64..10, 3),
    ) {
        let payoffs: Vec<Vec<i64>> = game
            .payoffs()
            .iter()
            .enumerate()
            .map(|(i, u)| u.iter().map(|v| v * scales[i] + shifts[i]).collect())
            .collect();
        let moved = Game::new(game.space().clone(), payoffs).unwrap();
        prop_assert_eq!(moved.best_reply_structure(), game.best_reply_structure());
        prop_assert_eq!(moved.find_pne(), game.find_pne());
        let f = decide_success(&StrategyVector::build(&CanonicalH, &game).unwrap(), &game, 1 << 16).unwrap();
        let g = decide_success(&StrategyVector::build(&CanonicalH, &moved).unwrap(), &moved, 1 << 16).unwrap();
        prop_assert_eq!(f.outcome, g.outcome);
    }

    #[test]
    fn deterministic_orbits_agree_with_the_graph(game in arb_counts(2, 3).prop_flat_map(|c| arb_game(c, 2))) {
        let f = StrategyVector::build(&QueryProtocol3, &game).unwrap();
        let graph = build_graph(&f, &game, 1 << 16).unwrap();
        let verdict = uncoupled::analysis::decide_on_graph(&graph, &game);
        let space = game.space();
        // Follow each orbit until it cycles; it must hit an absorbing PNE repeat
        // exactly when the node is not in the failing set.
        for x in 0..graph.node_count() {
            let mut seen = vec![false; graph.node_count()];
            let mut y = x;
            let mut hit = false;
            while !seen[y] {
                seen[y] = true;
                if graph.is_pne_repeat(y) && graph.is_absorbing(y) {
                    hit = true;
                    break;
                }
                y = graph.successors(y)[0];
            }
            let state = RecallState::from_indices(space, graph.state(x).indices().to_vec()).unwrap();
            if !game.find_pne().is_empty() {
                prop_assert_eq!(hit, !verdict.fails_from(&state));
            }
        }
    }

    #[test]
    fn traces_depend_only_on_the_seed(game in small_game(), seed in any::<u64>()) {
        let h = StrategyVector::build(&CanonicalH, &game).unwrap();
        let start = RecallState::from_indices(game.space(), vec![0]).unwrap();
        let a = simulate(&h, &start, 50, seed).unwrap();
        prop_assert_eq!(&a, &simulate(&h, &start, 50, seed).unwrap());
        for w in a.run().collect::<Vec<_>>().windows(2) {
            prop_assert!(h.successors(&[w[0]]).iter().any(|(q, _)| *q == w[1]));
        }
    }
}

#[test]
fn two_by_two_structures_round_trip() {
    let space = ProfileSpace::new(vec![2, 2]).unwrap();
    for class in [GameClass::All, GameClass::Generic] {
        let total = count_structures(&space, class).unwrap();
        assert_eq!(total, if class == GameClass::All { 81 } else { 16 });
        let all: Vec<_> = enumerate_structures(&EnumerationSpec::exhaustive(space.clone(), class))
            .unwrap()
            .collect();
        assert_eq!(all.len() as u128, total);
        for (i, s) in all.iter().enumerate() {
            assert_eq!(&realize_game(s).best_reply_structure(), s);
            assert_eq!(structure_index(s, class).unwrap(), i as u128);
            assert_eq!(&structure_at(&space, class, i as u128).unwrap(), s);
            assert_eq!(s.is_generic(), class == GameClass::Generic || s.tables().iter().flatten().all(|b| b.len() == 1));
        }
        let distinct: std::collections::BTreeSet<_> = all.iter().map(|s| format!("{:?}", s.tables())).collect();
        assert_eq!(distinct.len(), all.len());
    }
}

#[test]
fn structure_counts_match_the_formula() {
    for (counts, all, generic) in [
        (vec![2, 2], 81u128, 16u128),
        (vec![2, 3], 1323, 72),
        (vec![2, 4], 18225, 256),
        (vec![2, 2, 2], 531_441, 4096),
        (vec![2, 2, 3], 3u128.pow(6) * 3u128.pow(6) * 7u128.pow(4), 2u128.pow(12) * 81),
    ] {
        let space = ProfileSpace::new(counts).unwrap();
        assert_eq!(count_structures(&space, GameClass::All).unwrap(), all);
        assert_eq!(count_structures(&space, GameClass::Generic).unwrap(), generic);
    }
}
