mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use uncoupled::analysis::{
    build_graph, decide_success, node_count, sample_exact, simulate, simulate_stream, trace_rng,
    Outcome,
};
use uncoupled::dynamics::{canonical_h, det2, det3, min_best_reply, RecallState, StrategyVector};
use uncoupled::fixtures::{lemma10_game, lemma14_game, lemma15_game};
use uncoupled::{Error, Game, Profile, ProfileSpace};

fn profile(p: &[usize]) -> Profile {
    Profile::from_one_based(p).unwrap()
}

fn h_next(g: &Game) -> impl Fn(&[usize]) -> Vec<usize> + '_ {
    let counts = g.space().action_counts().to_vec();
    move |s: &[usize]| {
        let p = unflatten(&counts, s[0]);
        let per: Vec<Dist> = (0..counts.len()).map(|i| h_player(g, i, &p)).collect();
        product(&counts, &per).into_keys().collect()
    }
}

#[test]
fn h_graph_edges_are_product_supports() {
    for counts in [&[2usize, 2][..], &[2, 3], &[3, 3], &[2, 2, 2]] {
        for seed in 0..10 {
            let g = random_game(counts, 3, seed);
            let graph = build_graph(&canonical_h(&g), &g, 1 << 20).unwrap();
            assert_eq!(graph.node_count(), g.space().size());
            let next = h_next(&g);
            for x in 0..graph.node_count() {
                assert_eq!(graph.successors(x), &next(&[x])[..]);
                let p = unflatten(counts, x);
                let degree: usize = (0..counts.len()).map(|i| h_player(&g, i, &p).len()).product();
                assert_eq!(graph.successors(x).len(), degree);
                let total: Q = graph.edge_weights(x).iter().copied().sum();
                assert_eq!(total, Q::from_integer(1));
            }
        }
    }
}

#[test]
fn deterministic_graphs_are_functional_and_shift_consistent() {
    let g = random_game(&[2, 3], 5, 11);
    let g4 = random_game(&[4, 4], 5, 12);
    let cases: Vec<(StrategyVector, &Game)> =
        vec![(det3(&g), &g), (min_best_reply(&g), &g), (det2(&g4).unwrap(), &g4)];
    for (f, game) in cases {
        let graph = build_graph(&f, game, 1 << 20).unwrap();
        assert_eq!(graph.node_count(), game.space().size().pow(f.recall() as u32));
        for x in 0..graph.node_count() {
            assert_eq!(graph.successors(x).len(), 1);
            let s = graph.state(x);
            let t = graph.state(graph.successors(x)[0]);
            assert_eq!(&s.indices()[1..], &t.indices()[..f.recall() - 1]);
            assert_eq!(graph.node_of(&s).unwrap(), x);
        }
    }
}

#[test]
fn reachable_set_is_the_naive_fixpoint() {
    for seed in 0..10 {
        let g = random_game(&[2, 2, 2], 3, seed + 70);
        let graph = build_graph(&canonical_h(&g), &g, 1 << 20).unwrap();
        let succ = |x: usize| graph.successors(x).to_vec();
        for x in 0..graph.node_count() {
            let expect: Vec<usize> = closure(&succ, x).into_iter().collect();
            assert_eq!(graph.reachable_set(x).unwrap(), expect);
        }
    }
    let g = lemma10_game();
    let graph = build_graph(&canonical_h(&g), &g, 100).unwrap();
    let pne = g.space().index_of(&profile(&[1, 1, 1])).unwrap();
    assert_eq!(graph.reachable_set(pne).unwrap(), vec![pne]);
    assert!(graph.reachable_set(graph.node_count()).is_err());
}

#[test]
fn verdicts_agree_with_bruteforce() {
    let mut outcomes = BTreeMap::new();
    let mut games = vec![lemma10_game(), lemma14_game(2, 2).unwrap(), lemma15_game(3, 3, 3).unwrap()];
    for counts in [&[2usize, 2][..], &[2, 2, 2], &[3, 3], &[2, 3, 2]] {
        for seed in 0..40 {
            games.push(random_game(counts, 2 + seed as i64 % 3, seed + 1000));
        }
    }
    for g in games {
        let counts = g.space().action_counts().to_vec();
        {
            let has_pne = !pne_list(&g).is_empty();
            let v = decide_success(&canonical_h(&g), &g, 1 << 20).unwrap();
            *outcomes.entry(v.outcome).or_insert(0) += 1;
            match v.outcome {
                Outcome::NoPne => assert!(!has_pne),
                o => {
                    assert!(has_pne);
                    assert_eq!(o == Outcome::SelfStabilizes, self_stabilizes(&g, 1, &h_next(&g)));
                }
            }
            assert_eq!(v.witness.is_some(), v.outcome == Outcome::Fails);

            let f = det3(&g);
            let v = decide_success(&f, &g, 1 << 20).unwrap();
            if has_pne {
                let next = |s: &[usize]| f.successors(s).into_iter().map(|(q, _)| q).collect();
                if counts.iter().product::<usize>() <= 8 {
                    assert_eq!(v.outcome == Outcome::SelfStabilizes, self_stabilizes(&g, 3, &next));
                }
            }
        }
    }
    // The sample has both successes and failures for h.
    assert!(outcomes.get(&Outcome::Fails).is_some_and(|&n| n > 0), "{outcomes:?}");
    assert!(outcomes.get(&Outcome::SelfStabilizes).is_some_and(|&n| n > 0));
}

#[test]
fn three_player_trap_graph() {
    let g = lemma10_game();
    let graph = build_graph(&canonical_h(&g), &g, 100).unwrap();
    assert_eq!(graph.node_count(), 8);
    let pne = g.space().index_of(&profile(&[1, 1, 1])).unwrap();
    assert_eq!(graph.successors(pne), &[pne]);
    assert_eq!(graph.absorbing_states(), vec![pne]);
    assert_eq!(graph.absorbing_pne_states(), vec![pne]);
    let start = g.space().index_of(&profile(&[1, 1, 2])).unwrap();
    assert!(!graph.reachable_set(start).unwrap().contains(&pne));

    let v = decide_success(&canonical_h(&g), &g, 100).unwrap();
    assert_eq!(v.outcome, Outcome::Fails);
    let w = v.witness.as_ref().unwrap();
    assert_eq!(w.state.profiles(g.space()), vec![profile(&[1, 1, 2])]);
    assert!(w.reachable.iter().all(|x| !graph.is_pne_repeat(*x)));
    assert_eq!(decide_success(&det3(&g), &g, 1000).unwrap().outcome, Outcome::SelfStabilizes);
}

#[test]
fn larger_trap_games() {
    let g = lemma14_game(2, 2).unwrap();
    let graph = build_graph(&canonical_h(&g), &g, 100).unwrap();
    assert_eq!(graph.node_count(), 16);
    let start = g.space().index_of(&profile(&[1, 1, 1, 1])).unwrap();
    let reach = graph.reachable_set(start).unwrap();
    for p in pne_list(&g) {
        assert!(!reach.contains(&flatten(&[2, 2, 2, 2], &p)));
    }
    assert!(reach.iter().all(|&x| !graph.is_pne_repeat(x)));

    for (k1, k2, k3) in [(3, 3, 3), (4, 3, 3), (3, 4, 4)] {
        let g = lemma15_game(k1, k2, k3).unwrap();
        let v = decide_success(&canonical_h(&g), &g, 100).unwrap();
        assert_eq!(v.outcome, Outcome::Fails);
        assert!(g.space().size() <= 48);
        let s = RecallState::new(g.space(), &[profile(&[1, 2, 1])]).unwrap();
        assert!(v.fails_from(&s));
        // Every state reachable from (1,2,1) keeps both an action 1 and an action 2.
        let graph = build_graph(&canonical_h(&g), &g, 100).unwrap();
        for x in graph.reachable_set(g.space().index_of(s.profiles(g.space()).first().unwrap()).unwrap()).unwrap() {
            let p = g.space().profile(x).one_based();
            assert!(p.contains(&1) && p.contains(&2), "{p:?}");
        }
    }
}

#[test]
fn absorbing_states_under_h_are_exactly_the_equilibria() {
    for seed in 0..20 {
        let g = random_game(&[2, 3, 2], 3, seed + 300);
        let graph = build_graph(&canonical_h(&g), &g, 100).unwrap();
        let expect: Vec<usize> = pne_list(&g).iter().map(|p| flatten(&[2, 3, 2], p)).collect();
        assert_eq!(graph.absorbing_states(), expect);
    }
}

#[test]
fn det3_query_within_two_steps() {
    for seed in 0..5 {
        let g = random_game(&[2, 3], 4, seed + 20);
        let graph = build_graph(&det3(&g), &g, 1 << 20).unwrap();
        let is_query = |x: usize| {
            let s = graph.state(x);
            s.indices()[1] == s.indices()[2]
        };
        for x in 0..graph.node_count() {
            let y = graph.successors(x)[0];
            let z = graph.successors(y)[0];
            assert!(is_query(x) || is_query(y) || is_query(z));
        }
    }
}

#[test]
fn budget_is_enforced() {
    let g = random_game(&[3, 3, 3], 3, 0);
    match build_graph(&det3(&g), &g, 10_000) {
        Err(Error::Resource { required, .. }) => assert_eq!(required, "19683"),
        other => panic!("expected a budget error, got {other:?}"),
    }
    assert!(decide_success(&det3(&g), &g, 10_000).is_err());
    assert_eq!(node_count(g.space(), 3, 19_683).unwrap(), 19_683);
}

#[test]
fn constant_game_stabilizes_everywhere() {
    let g = Game::from_fn(ProfileSpace::new(vec![2, 2]).unwrap(), |_, _| 7);
    for f in [canonical_h(&g), det3(&g), min_best_reply(&g)] {
        assert_eq!(decide_success(&f, &g, 1000).unwrap().outcome, Outcome::SelfStabilizes);
    }
}

#[test]
fn traces_are_reproducible() {
    let g = lemma10_game();
    let h = canonical_h(&g);
    let s = RecallState::new(g.space(), &[profile(&[1, 2, 1])]).unwrap();
    let a = simulate(&h, &s, 200, 42).unwrap();
    assert_eq!(a, simulate(&h, &s, 200, 42).unwrap());
    assert_ne!(a.profiles, simulate(&h, &s, 200, 43).unwrap().profiles);
    assert_ne!(a.profiles, simulate_stream(&h, &s, 200, 42, 1).unwrap().profiles);
    assert_eq!(a.rng, "ChaCha8Rng");

    let f = det3(&g);
    let s3 = RecallState::repeated(g.space(), &profile(&[2, 2, 2]), 3).unwrap();
    assert_eq!(
        simulate(&f, &s3, 100, 1).unwrap(),
        uncoupled::analysis::Trace { seed: 1, ..simulate(&f, &s3, 100, 2).unwrap() }
    );
}

#[test]
fn h_keeps_player_three_on_two_in_the_trap() {
    let g = lemma10_game();
    let h = canonical_h(&g);
    let s = RecallState::new(g.space(), &[profile(&[1, 1, 2])]).unwrap();
    for seed in 0..50 {
        let t = simulate(&h, &s, 200, seed).unwrap();
        assert!(!t.absorbed);
        assert!(t.run().all(|x| g.space().action_at(x, 2) == 1));
    }
}

#[test]
fn simulation_stops_on_absorption() {
    let g = lemma10_game();
    let h = canonical_h(&g);
    let s = RecallState::new(g.space(), &[profile(&[2, 1, 1])]).unwrap();
    let pne = g.space().index_of(&profile(&[1, 1, 1])).unwrap();
    let mut absorbed = 0;
    for seed in 0..100 {
        let t = simulate(&h, &s, 10_000, seed).unwrap();
        if t.absorbed {
            absorbed += 1;
            assert_eq!(t.profiles.last(), Some(&pne));
            assert_eq!(t.profiles.iter().filter(|&&x| x == pne).count(), 1);
        } else {
            // Otherwise the run fell into the trap where player 3 sits on 2.
            assert_eq!(t.steps(), 10_000);
            assert_eq!(g.space().action_at(*t.profiles.last().unwrap(), 2), 1);
        }
    }
    assert!(absorbed > 0 && absorbed < 100, "{absorbed}");
}

#[test]
fn det2_reaches_equilibria_quickly() {
    // Bound 3|A| + 2 from the query-every-other-step cadence, from every state.
    let space = ProfileSpace::new(vec![4, 4]).unwrap();
    let bound = 3 * space.size() + 2;
    let mut checked = 0;
    for seed in 0..1000 {
        let g = uncoupled::generators::random_game(&space, seed, uncoupled::generators::GameClass::All).unwrap();
        if g.find_pne().is_empty() {
            continue;
        }
        checked += 1;
        let f = det2(&g).unwrap();
        let graph = build_graph(&f, &g, 1 << 20).unwrap();
        for x in 0..graph.node_count() {
            let initial = graph.state(x);
            let t = simulate(&f, &initial, bound, seed).unwrap();
            assert!(t.absorbed, "seed {seed} from {}", initial.display(&space));
            assert!(g.is_pne_at(t.run().last().unwrap()));
        }
    }
    assert!(checked > 500);
}

#[test]
fn exact_sampler_frequencies() {
    let outcomes = vec![(0, Q::new(1, 6)), (3, Q::new(1, 2)), (5, Q::new(1, 3))];
    let mut rng = trace_rng(9, 0);
    let n = 60_000u32;
    let mut counts = BTreeMap::new();
    for _ in 0..n {
        *counts.entry(sample_exact(&mut rng, &outcomes)).or_insert(0u32) += 1;
    }
    assert_eq!(counts.keys().copied().collect::<BTreeSet<_>>(), BTreeSet::from([0, 3, 5]));
    for (x, p) in outcomes {
        let p = *p.numer() as f64 / *p.denom() as f64;
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((counts[&x] as f64 - n as f64 * p).abs() <= 3.0 * sigma);
    }
}
