//! Move error distributions: one row-stochastic matrix per position.
//!
//! Row `w` of the matrix at position `v` is the distribution of the move that
//! actually lands when the player at `v` transmits follower index `w`. Rows
//! and columns both follow the order of `F(v)` in the owning [`GameGraph`].
//! Moves that would be invalid never appear: every row is already
//! conditioned on landing on a legal follower.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::graph::{GameGraph, PositionId};

/// Absolute tolerance on row sums.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelViolation {
    PositionCount { expected: usize, found: usize },
    Dimension { position: PositionId, expected: usize, found: usize },
    Range { position: PositionId, sent: usize, received: usize, value: f64 },
    RowSum { position: PositionId, sent: usize, sum: f64 },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelViolation::PositionCount { expected, found } => {
                write!(f, "model covers {found} positions, graph has {expected}")
            }
            ModelViolation::Dimension { position, expected, found } => {
                write!(f, "matrix at {position} has dimension {found}, expected {expected}")
            }
            ModelViolation::Range { position, sent, received, value } => {
                write!(f, "entry ({sent},{received}) at {position} is {value}, outside [0,1]")
            }
            ModelViolation::RowSum { position, sent, sum } => {
                write!(f, "row {sent} at {position} sums to {sum}")
            }
        }
    }
}

/// Per-position channel matrices. Terminal positions carry an empty matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveErrorModel {
    matrices: Vec<Vec<Vec<f64>>>,
}

impl MoveErrorModel {
    /// Wraps raw matrices without validation.
    pub fn from_matrices(matrices: Vec<Vec<Vec<f64>>>) -> Self {
        MoveErrorModel { matrices }
    }

    /// Wraps raw matrices and rejects them unless they form a valid model for `graph`.
    pub fn new(graph: &GameGraph, matrices: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let model = Self::from_matrices(matrices);
        let report = model.validate(graph);
        if report.is_empty() {
            Ok(model)
        } else {
            let msgs: Vec<String> = report.iter().map(ToString::to_string).collect();
            Err(GameError::InvalidModel(msgs.join("; ")))
        }
    }

    /// `ψ_v(w,u) = 1` iff `w = u`: the noiseless channel.
    pub fn identity(graph: &GameGraph) -> Self {
        Self::from_fn(graph, |_, n| (0..n).map(|w| (0..n).map(|u| if w == u { 1.0 } else { 0.0 }).collect()).collect())
    }

    /// Every transmitted move lands uniformly on any follower.
    pub fn equiprobable(graph: &GameGraph) -> Self {
        Self::from_fn(graph, |_, n| vec![vec![1.0 / n as f64; n]; n])
    }

    /// Builds a model from a per-position matrix generator `(position, out_degree) -> matrix`.
    pub fn from_fn<F>(graph: &GameGraph, mut matrix: F) -> Self
    where
        F: FnMut(PositionId, usize) -> Vec<Vec<f64>>,
    {
        let matrices = graph
            .positions()
            .map(|v| match graph.out_degree(v) {
                0 => Vec::new(),
                n => matrix(v, n),
            })
            .collect();
        MoveErrorModel { matrices }
    }

    /// Mixes every row with the uniform row: `(ψ + ε/|F(v)|) / (1 + ε)`.
    /// The result is strictly positive on every legal pair.
    pub fn perturb(&self, graph: &GameGraph, epsilon: f64) -> Result<Self> {
        if epsilon.is_nan() || epsilon <= 0.0 || epsilon.is_infinite() {
            return Err(GameError::NonPositiveEpsilon(epsilon));
        }
        self.check_dimensions(graph)?;
        let matrices = self
            .matrices
            .iter()
            .map(|matrix| {
                let n = matrix.len() as f64;
                matrix.iter().map(|row| row.iter().map(|&x| (x + epsilon / n) / (1.0 + epsilon)).collect()).collect()
            })
            .collect();
        Ok(MoveErrorModel { matrices })
    }

    /// Lists every violated invariant against `graph`.
    pub fn validate(&self, graph: &GameGraph) -> Vec<ModelViolation> {
        let mut report = Vec::new();
        if self.matrices.len() != graph.position_count() {
            report.push(ModelViolation::PositionCount { expected: graph.position_count(), found: self.matrices.len() });
            return report;
        }
        for (v, matrix) in graph.positions().zip(&self.matrices) {
            let n = graph.out_degree(v);
            if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
                let found = matrix.iter().map(Vec::len).find(|&len| len != n).unwrap_or(matrix.len());
                report.push(ModelViolation::Dimension { position: v, expected: n, found });
                continue;
            }
            for (sent, row) in matrix.iter().enumerate() {
                for (received, &value) in row.iter().enumerate() {
                    if !(0.0..=1.0).contains(&value) {
                        report.push(ModelViolation::Range { position: v, sent, received, value });
                    }
                }
                let sum: f64 = row.iter().sum();
                if sum.is_nan() || (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    report.push(ModelViolation::RowSum { position: v, sent, sum });
                }
            }
        }
        report
    }

    pub(crate) fn check_dimensions(&self, graph: &GameGraph) -> Result<()> {
        if self.matrices.len() != graph.position_count() {
            return Err(GameError::InvalidModel(format!(
                "model covers {} positions, graph has {}",
                self.matrices.len(),
                graph.position_count()
            )));
        }
        for (v, matrix) in graph.positions().zip(&self.matrices) {
            let n = graph.out_degree(v);
            if let Some(found) = std::iter::once(matrix.len()).chain(matrix.iter().map(Vec::len)).find(|&len| len != n)
            {
                return Err(GameError::DimensionMismatch { position: v, expected: n, found });
            }
        }
        Ok(())
    }

    #[inline]
    pub fn matrix(&self, v: PositionId) -> &[Vec<f64>] {
        &self.matrices[v.0]
    }

    /// Distribution of the landed move when `sent` is transmitted from `v`.
    #[inline]
    pub fn row(&self, v: PositionId, sent: usize) -> &[f64] {
        &self.matrices[v.0][sent]
    }

    /// True when every entry at every position is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.matrices.iter().flatten().flatten().all(|&x| x > 0.0)
    }

    /// True when every non-terminal row is uniform within [`ROW_SUM_TOLERANCE`].
    pub fn is_equiprobable(&self) -> bool {
        self.matrices.iter().all(|matrix| {
            let target = 1.0 / matrix.len() as f64;
            matrix.iter().flatten().all(|&x| (x - target).abs() <= ROW_SUM_TOLERANCE)
        })
    }

    pub fn matrices(&self) -> &[Vec<Vec<f64>>] {
        &self.matrices
    }
}
