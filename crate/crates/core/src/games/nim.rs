use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::graph::{GameGraph, PositionId};
use crate::model::MoveErrorModel;
use crate::solver::{solve, PositionClass};

/// Number of differing bits between the binary codes of `a` and `b`.
#[inline]
pub fn hamming(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

/// Number of binary digits of `m` (zero for zero).
#[inline]
pub fn bit_length(m: u64) -> u32 {
    u64::BITS - m.leading_zeros()
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GameError::ProbabilityOutOfRange(p))
    }
}

/// One-pile Nim with `k` chips. Position `m` holds `m` chips and its move
/// `s` (for `s < m`) leaves `s` chips, so move indices equal chips left.
pub fn nim1_graph(k: usize) -> GameGraph {
    let followers = (0..=k).map(|m| (0..m).map(PositionId).collect()).collect();
    let labels = (0..=k).map(|m| if m == 1 { "1 chip".to_string() } else { format!("{m} chips") }).collect();
    GameGraph::from_parts(followers, PositionId(k), labels)
}

/// Landing distribution at a heap of `m` chips when the move leaving `sent`
/// chips is transmitted. Each of the `bit_length(m)` digits flips
/// independently with probability `p`; codes `>= m` trigger retransmission,
/// so the row is conditioned on landing below `m`.
///
/// At `p = 1` the conditioned weights vanish; the row is the `p → 1` limit,
/// uniform over the legal codes farthest from `sent`.
pub fn hamming_row(m: usize, sent: usize, p: f64) -> Vec<f64> {
    debug_assert!(sent < m);
    let digits = bit_length(m as u64) as i32;
    let distances: Vec<u32> = (0..m).map(|j| hamming(sent as u64, j as u64)).collect();
    if p >= 1.0 {
        let farthest = distances.iter().copied().max().unwrap_or(0);
        let count = distances.iter().filter(|&&d| d == farthest).count() as f64;
        return distances.iter().map(|&d| if d == farthest { 1.0 / count } else { 0.0 }).collect();
    }
    let weights: Vec<f64> = distances.iter().map(|&d| p.powi(d as i32) * (1.0 - p).powi(digits - d as i32)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Hamming channel for one-pile Nim with `k` chips and digit-flip probability `p`.
pub fn nim1_model(k: usize, p: f64) -> Result<MoveErrorModel> {
    check_probability(p)?;
    let graph = nim1_graph(k);
    Ok(MoveErrorModel::from_fn(&graph, |v, m| {
        debug_assert_eq!(v.index(), m);
        (0..m).map(|sent| hamming_row(m, sent, p)).collect()
    }))
}

/// Start value and optimal transmitted moves of one-pile Nim at one `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub value: f64,
    pub optimal_moves: Vec<usize>,
}

fn nim1_point(graph: &GameGraph, k: usize, p: f64) -> Result<CurvePoint> {
    let solved = solve(graph, &nim1_model(k, p)?)?;
    let start = solved.position(graph.start());
    Ok(CurvePoint { p, value: start.value, optimal_moves: start.optimal_moves.clone() })
}

/// Solves one-pile Nim with `k` chips at every `p` of the grid.
pub fn nim1_solution_curve(k: usize, p_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    let graph = nim1_graph(k);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        p_grid.par_iter().map(|&p| nim1_point(&graph, k, p)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        p_grid.iter().map(|&p| nim1_point(&graph, k, p)).collect()
    }
}

fn strides(piles: &[usize]) -> Vec<usize> {
    let mut strides = Vec::with_capacity(piles.len());
    let mut acc = 1;
    for &pile in piles {
        strides.push(acc);
        acc *= pile + 1;
    }
    strides
}

/// Every pile tuple dominated componentwise by `piles`, in graph index order
/// (mixed radix, first pile least significant).
pub fn nim_multi_positions(piles: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = piles.iter().map(|&p| p + 1).product();
    (0..total)
        .map(|mut index| {
            piles
                .iter()
                .map(|&pile| {
                    let digit = index % (pile + 1);
                    index /= pile + 1;
                    digit
                })
                .collect()
        })
        .collect()
}

/// Multi-pile Nim. A move reduces one pile to any smaller count; followers
/// are ordered by pile, then by the new count ascending.
pub fn nim_multi_graph(piles: &[usize]) -> Result<GameGraph> {
    if piles.is_empty() {
        return Err(GameError::InvalidParameters("multi-pile Nim needs at least one pile".into()));
    }
    let strides = strides(piles);
    let tuples = nim_multi_positions(piles);
    let followers = tuples
        .iter()
        .enumerate()
        .map(|(index, tuple)| {
            tuple
                .iter()
                .enumerate()
                .flat_map(|(pile, &count)| {
                    let stride = strides[pile];
                    (0..count).map(move |smaller| PositionId(index - (count - smaller) * stride))
                })
                .collect()
        })
        .collect();
    let labels = tuples
        .iter()
        .map(|t| {
            let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(GameGraph::from_parts(followers, PositionId(tuples.len() - 1), labels))
}

/// Expected class of a multi-pile Nim position under the equiprobable
/// channel: positions made only of 0s and 1s are N when the number of
/// 1-piles is odd and P when it is even; everything else is O.
pub fn nim_multi_expected_class(position: &[usize]) -> PositionClass {
    if position.iter().all(|&c| c <= 1) {
        if position.iter().filter(|&&c| c == 1).count() % 2 == 1 {
            PositionClass::N
        } else {
            PositionClass::P
        }
    } else {
        PositionClass::O
    }
}
