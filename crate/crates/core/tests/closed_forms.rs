//! Solver output against hand-derived closed forms for small games.

use noisy_games::games::{hamming_row, nim1_graph, nim1_model, ChompBoard, ChompVariant};
use noisy_games::{solve, PositionClass, PositionId};
use proptest::prelude::*;

fn nim_start(k: usize, p: f64) -> noisy_games::PositionSolution {
    let solved = solve(&nim1_graph(k), &nim1_model(k, p).unwrap()).unwrap();
    solved.position(PositionId(k)).clone()
}

fn three_chip_moves(p: f64) -> [f64; 3] {
    let q = 1.0 - p + p * p;
    if p <= 0.5 {
        [q / (1.0 + p), p, (2.0 * p - 3.0 * p * p + p * p * p) / q]
    } else {
        [1.0 - p, (p - p * p * p) / q, 1.0 - p]
    }
}

#[test]
fn three_chips_at_point_three() {
    let s = nim_start(3, 0.3);
    assert!((s.value - 0.79 / 1.3).abs() < 1e-12);
    assert_eq!(s.optimal_moves, vec![0]);
    let expected = three_chip_moves(0.3);
    for (a, b) in s.move_values.iter().zip(expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn three_chips_at_point_six() {
    let s = nim_start(3, 0.6);
    assert!((s.value - 0.384 / 0.76).abs() < 1e-12);
    assert_eq!(s.optimal_moves, vec![1]);
}

#[test]
fn three_chips_fair_at_half() {
    let s = nim_start(3, 0.5);
    assert_eq!(s.optimal_moves, vec![0, 1, 2]);
    assert!(s.move_values.iter().all(|&x| (x - 0.5).abs() < 1e-15));
}

#[test]
fn half_probability_makes_every_move_equal() {
    for k in 1..=12 {
        let solved = solve(&nim1_graph(k), &nim1_model(k, 0.5).unwrap()).unwrap();
        for pos in solved.positions() {
            if let Some(first) = pos.move_values.first() {
                assert!(pos.move_values.iter().all(|x| x == first), "k={k}");
            }
        }
    }
}

#[test]
fn chomp_two_by_two_is_a_chance_game_at_one_third() {
    let board = ChompBoard::new(2, 2).unwrap();
    let model = board.model(ChompVariant::N8, 1.0 / 3.0).unwrap();
    let solved = solve(board.graph(), &model).unwrap();
    let start = solved.position(board.graph().start());
    for &x in &start.move_values {
        assert!((x - 1.0 / 3.0).abs() < 1e-12);
    }
    assert_eq!(start.optimal_moves.len(), 3);
}

#[test]
fn chomp_two_by_two_optimal_moves() {
    let board = ChompBoard::new(2, 2).unwrap();
    let start = board.graph().start();
    let top_right = board.move_index(start, (1, 1)).unwrap();
    let edges = {
        let mut v = vec![board.move_index(start, (1, 0)).unwrap(), board.move_index(start, (0, 1)).unwrap()];
        v.sort();
        v
    };
    for (p, expected) in [(0.1, edges.clone()), (0.3, edges), (0.4, vec![top_right]), (0.8, vec![top_right])] {
        let solved = solve(board.graph(), &board.model(ChompVariant::N8, p).unwrap()).unwrap();
        assert_eq!(solved.position(start).optimal_moves, expected, "p={p}");
    }
}

#[test]
fn chomp_classes_of_small_shapes() {
    let board = ChompBoard::new(2, 2).unwrap();
    let solved = solve(board.graph(), &board.model(ChompVariant::N8, 0.5).unwrap()).unwrap();
    let class = |h: &[usize]| solved.position(board.position_id(h).unwrap()).class;
    assert_eq!(class(&[1, 0]), PositionClass::P);
    assert_eq!(class(&[1, 1]), PositionClass::N);
    assert_eq!(class(&[2, 0]), PositionClass::N);
    assert_eq!(class(&[2, 1]), PositionClass::P);
    assert_eq!(class(&[2, 2]), PositionClass::O);
}

#[test]
fn empty_heap_is_lost() {
    let solved = solve(&nim1_graph(0), &nim1_model(0, 0.4).unwrap()).unwrap();
    assert_eq!(solved.start_value(), 0.0);
}

proptest! {
    #[test]
    fn three_chip_curves(p in 0.0f64..=1.0) {
        let s = nim_start(3, p);
        let expected = three_chip_moves(p);
        for (a, b) in s.move_values.iter().zip(expected) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn two_chips(p in 0.0f64..=1.0) {
        prop_assert!((nim_start(2, p).value - p.max(1.0 - p)).abs() <= 1e-15);
    }

    #[test]
    fn chomp_two_by_two(p in 0.0f64..=1.0) {
        let board = ChompBoard::new(2, 2).unwrap();
        let solved = solve(board.graph(), &board.model(ChompVariant::N8, p).unwrap()).unwrap();
        prop_assert!((solved.start_value() - p.max((1.0 - p) / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn hamming_rows_are_stochastic(m in 1usize..64, p in 0.0f64..=1.0) {
        for sent in 0..m {
            let row = hamming_row(m, sent, p);
            prop_assert!(row.iter().all(|&x| (0.0..=1.0).contains(&x)));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn hamming_rows_at_endpoints_are_stochastic() {
    for k in [1, 5, 16, 33] {
        for p in [0.0, 1.0] {
            let model = nim1_model(k, p).unwrap();
            assert!(model.validate(&nim1_graph(k)).is_empty());
        }
    }
}
