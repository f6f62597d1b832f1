//! Solver agreement with independent oracles and the structural properties
//! of noisy-channel games.

mod common;

use common::{count_staircases, grundy_values, random_dag, random_model, PathOracle};
use noisy_games::games::{chomp_graph, nim_multi_expected_class, nim_multi_graph, nim_multi_positions};
use noisy_games::{fair_chance_hypotheses, solve, GameGraph, MoveErrorModel, PositionClass};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, positive: bool) -> (GameGraph, MoveErrorModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = random_dag(&mut rng, 8);
    let model = random_model(&mut rng, &graph, positive);
    (graph, model)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_matches_path_oracle(seed in any::<u64>()) {
        let (graph, model) = instance(seed, false);
        let solved = solve(&graph, &model).unwrap();
        let mut oracle = PathOracle::new(&graph, &model);
        for v in graph.positions() {
            prop_assert!((solved.value(v) - oracle.value(v)).abs() <= 1e-12);
            for (w, &value) in solved.position(v).move_values.iter().enumerate() {
                prop_assert!((value - oracle.move_value(v, w)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn topological_order_is_followers_first(seed in any::<u64>()) {
        let (graph, _) = instance(seed, false);
        let order = graph.topological_order().unwrap();
        let mut rank = vec![usize::MAX; graph.position_count()];
        for (i, v) in order.iter().enumerate() {
            prop_assert_eq!(rank[v.0], usize::MAX);
            rank[v.0] = i;
        }
        prop_assert!(rank.iter().all(|&r| r != usize::MAX));
        for v in graph.positions() {
            for u in graph.followers(v) {
                prop_assert!(rank[u.0] < rank[v.0]);
            }
            prop_assert_eq!(graph.terminals().contains(&v), graph.out_degree(v) == 0);
        }
    }

    #[test]
    fn move_values_are_bounded_convex_combinations(seed in any::<u64>()) {
        let (graph, model) = instance(seed, false);
        let solved = solve(&graph, &model).unwrap();
        for v in graph.positions().filter(|&v| !graph.is_terminal(v)) {
            let losses: Vec<f64> = graph.followers(v).iter().map(|&u| 1.0 - solved.value(u)).collect();
            let lo = losses.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let s = solved.position(v);
            for &x in &s.move_values {
                prop_assert!(x >= lo - 1e-12 && x <= hi + 1e-12);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&x));
            }
            prop_assert!(!s.optimal_moves.is_empty());
            for &w in &s.optimal_moves {
                prop_assert!(s.move_values[w] >= s.value - 1e-9);
            }
        }
    }

    #[test]
    fn positive_channel_classes(seed in any::<u64>()) {
        let (graph, model) = instance(seed, true);
        let solved = solve(&graph, &model).unwrap();
        let classes = solved.classify();
        for v in graph.positions().filter(|&v| !graph.is_terminal(v)) {
            let fs = graph.followers(v);
            let all_n = fs.iter().all(|u| classes[u.0] == PositionClass::N);
            let all_p = fs.iter().all(|u| classes[u.0] == PositionClass::P);
            prop_assert_eq!(classes[v.0] == PositionClass::P, all_n);
            prop_assert_eq!(classes[v.0] == PositionClass::N, all_p);
        }
    }

    #[test]
    fn perturbation_is_small_and_keeps_clear_optima(seed in any::<u64>(), eps in 1e-7f64..1e-4) {
        let (graph, model) = instance(seed, false);
        let perturbed = model.perturb(&graph, eps).unwrap();
        prop_assert!(perturbed.is_strictly_positive());
        prop_assert!(perturbed.validate(&graph).is_empty());
        let a = solve(&graph, &model).unwrap();
        let b = solve(&graph, &perturbed).unwrap();
        for v in graph.positions() {
            prop_assert!((a.value(v) - b.value(v)).abs() <= 2.0 * eps);
            let s = a.position(v);
            if s.optimal_moves.len() == 1 {
                let best = s.optimal_moves[0];
                let gap = s.move_values.iter().enumerate()
                    .filter(|&(w, _)| w != best)
                    .map(|(_, &x)| s.value - x)
                    .fold(f64::INFINITY, f64::min);
                if gap >= 100.0 * eps {
                    prop_assert_eq!(b.position(v).canonical_move(), Some(best));
                }
            }
        }
    }
}

#[test]
fn identity_channel_reproduces_classical_outcomes() {
    for seed in 0..300 {
        let (graph, _) = instance(seed, false);
        let solved = solve(&graph, &MoveErrorModel::identity(&graph)).unwrap();
        let grundy = grundy_values(&graph);
        for v in graph.positions() {
            let expected = if grundy[v.0] == 0 { PositionClass::P } else { PositionClass::N };
            assert_eq!(solved.position(v).class, expected, "seed {seed} position {v}");
            assert!(solved.value(v) == 0.0 || solved.value(v) == 1.0);
        }
    }
}

#[test]
fn fair_chance_hypotheses_force_one_half() {
    let mut passing = 0;
    for seed in 0..2000 {
        let (graph, _) = instance(seed, false);
        let model = MoveErrorModel::equiprobable(&graph);
        let solved = solve(&graph, &model).unwrap();
        if !fair_chance_hypotheses(&graph, &model, &solved) {
            continue;
        }
        passing += 1;
        for v in graph.positions() {
            if solved.position(v).class == PositionClass::O {
                assert!((solved.value(v) - 0.5).abs() <= 1e-12, "seed {seed}");
            }
        }
    }
    assert!(passing > 100, "only {passing} instances satisfied the hypotheses");
}

#[test]
fn fair_chance_hypotheses_examples() {
    let graph = nim_multi_graph(&[2, 2]).unwrap();
    let model = MoveErrorModel::equiprobable(&graph);
    let solved = solve(&graph, &model).unwrap();
    assert!(fair_chance_hypotheses(&graph, &model, &solved));
    assert!((solved.start_value() - 0.5).abs() <= 1e-12);

    let chomp = chomp_graph(2, 2).unwrap();
    let model = MoveErrorModel::equiprobable(&chomp);
    let solved = solve(&chomp, &model).unwrap();
    assert!(!fair_chance_hypotheses(&chomp, &model, &solved));

    // non-equiprobable channels never qualify
    let model = MoveErrorModel::identity(&graph);
    let solved = solve(&graph, &model).unwrap();
    assert!(!fair_chance_hypotheses(&graph, &model, &solved));
}

#[test]
fn multi_pile_nim_classes_match_parity_rule() {
    let mut tuples = Vec::new();
    for piles in 1..=3usize {
        let mut t = vec![0usize; piles];
        loop {
            tuples.push(t.clone());
            let mut i = 0;
            while i < piles && t[i] == 4 {
                t[i] = 0;
                i += 1;
            }
            if i == piles {
                break;
            }
            t[i] += 1;
        }
    }
    for piles in tuples {
        let graph = nim_multi_graph(&piles).unwrap();
        let positions = nim_multi_positions(&piles);
        let model = MoveErrorModel::equiprobable(&graph);
        let solved = solve(&graph, &model).unwrap();
        for v in graph.positions() {
            let expected = nim_multi_expected_class(&positions[v.0]);
            assert_eq!(solved.position(v).class, expected, "{piles:?} at {:?}", positions[v.0]);
            if expected == PositionClass::O {
                assert!((solved.value(v) - 0.5).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn chomp_position_counts_match_enumeration() {
    for rows in 1..=4 {
        for cols in 1..=4 {
            let graph = chomp_graph(rows, cols).unwrap();
            assert_eq!(graph.position_count(), count_staircases(rows, cols), "{rows}x{cols}");
            assert_eq!(graph.terminals().len(), 1);
            assert!(graph.validate().is_empty());
        }
    }
}

#[test]
fn chomp_two_by_two_order_starts_at_poisoned_square() {
    let board = noisy_games::games::ChompBoard::new(2, 2).unwrap();
    let order = board.graph().topological_order().unwrap();
    assert_eq!(board.position(order[0]).heights(), &[1, 0]);
    assert_eq!(order.last().copied(), Some(board.graph().start()));
    assert_eq!(order.len(), 5);
}
