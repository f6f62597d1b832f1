//! Backward induction over the game DAG.
//!
//! For a transmitted move `w` at `v` the win probability of the mover is
//! `N_v(w) = Σ_u (1 - N_u) · ψ_v(w, u)`, and `N_v` is the maximum over `w`
//! (zero at terminals). Positions are evaluated in followers-first order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::graph::{GameGraph, PositionId};
use crate::model::MoveErrorModel;

/// Tolerance used for optimal-move ties and P/N classification.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PositionClass {
    /// The player to move loses with certainty.
    P,
    /// The player to move wins with certainty.
    N,
    /// Outcome depends on the channel.
    O,
}

impl PositionClass {
    pub fn from_value(value: f64) -> Self {
        if value <= TIE_TOLERANCE {
            PositionClass::P
        } else if value >= 1.0 - TIE_TOLERANCE {
            PositionClass::N
        } else {
            PositionClass::O
        }
    }
}

impl fmt::Display for PositionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PositionClass::P => "P",
            PositionClass::N => "N",
            PositionClass::O => "O",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionSolution {
    pub value: f64,
    /// Aligned with the follower order of the position.
    pub move_values: Vec<f64>,
    /// Ascending move indices within [`TIE_TOLERANCE`] of `value`.
    pub optimal_moves: Vec<usize>,
    pub class: PositionClass,
}

impl PositionSolution {
    /// Smallest optimal move index, `None` at terminals.
    pub fn canonical_move(&self) -> Option<usize> {
        self.optimal_moves.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolvedGame {
    positions: Vec<PositionSolution>,
    start: PositionId,
}

impl SolvedGame {
    pub fn position(&self, v: PositionId) -> &PositionSolution {
        &self.positions[v.0]
    }

    pub fn value(&self, v: PositionId) -> f64 {
        self.positions[v.0].value
    }

    pub fn start(&self) -> PositionId {
        self.start
    }

    pub fn start_value(&self) -> f64 {
        self.value(self.start)
    }

    pub fn positions(&self) -> &[PositionSolution] {
        &self.positions
    }

    pub fn values(&self) -> Vec<f64> {
        self.positions.iter().map(|s| s.value).collect()
    }

    /// Per-position P/N/O labels.
    pub fn classify(&self) -> Vec<PositionClass> {
        self.positions.iter().map(|s| s.class).collect()
    }
}

/// Win probability of each transmitted move given the landing distribution
/// rows and the values of the followers.
pub fn move_values(follower_values: &[f64], rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    rows.iter()
        .map(|row| {
            if row.len() != follower_values.len() {
                return Err(GameError::DimensionMismatch {
                    position: PositionId(usize::MAX),
                    expected: follower_values.len(),
                    found: row.len(),
                });
            }
            Ok(row.iter().zip(follower_values).map(|(&prob, &value)| (1.0 - value) * prob).sum())
        })
        .collect()
}

fn optimal_set(values: &[f64]) -> (f64, Vec<usize>) {
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let optimal = values.iter().enumerate().filter(|(_, &x)| x >= best - TIE_TOLERANCE).map(|(i, _)| i).collect();
    (best, optimal)
}

/// Solves every position of `graph` under `model`.
pub fn solve(graph: &GameGraph, model: &MoveErrorModel) -> Result<SolvedGame> {
    let order = graph.topological_order()?;
    model.check_dimensions(graph)?;
    let mut solved: Vec<Option<PositionSolution>> = vec![None; graph.position_count()];
    let mut follower_values = Vec::new();
    for v in order {
        let solution = if graph.is_terminal(v) {
            PositionSolution { value: 0.0, move_values: Vec::new(), optimal_moves: Vec::new(), class: PositionClass::P }
        } else {
            follower_values.clear();
            follower_values.extend(graph.followers(v).iter().map(|u| solved[u.0].as_ref().map_or(0.0, |s| s.value)));
            let values = move_values(&follower_values, model.matrix(v)).map_err(|e| match e {
                GameError::DimensionMismatch { expected, found, .. } => {
                    GameError::DimensionMismatch { position: v, expected, found }
                }
                other => other,
            })?;
            let (value, optimal_moves) = optimal_set(&values);
            PositionSolution { value, move_values: values, optimal_moves, class: PositionClass::from_value(value) }
        };
        solved[v.0] = Some(solution);
    }
    Ok(SolvedGame {
        positions: solved.into_iter().map(|s| s.expect("every position is ordered")).collect(),
        start: graph.start(),
    })
}

/// Checks the hypotheses under which every O-position is worth exactly 1/2:
/// the model is equiprobable everywhere and each O-position has as many
/// P-followers as N-followers.
pub fn fair_chance_hypotheses(graph: &GameGraph, model: &MoveErrorModel, solved: &SolvedGame) -> bool {
    if !model.is_equiprobable() {
        return false;
    }
    graph.positions().all(|v| {
        if solved.position(v).class != PositionClass::O {
            return true;
        }
        let (mut losing, mut winning) = (0usize, 0usize);
        for &u in graph.followers(v) {
            match solved.position(u).class {
                PositionClass::P => losing += 1,
                PositionClass::N => winning += 1,
                PositionClass::O => {}
            }
        }
        losing == winning
    })
}
