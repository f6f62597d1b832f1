//! Finite game digraphs and their evaluation order.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};

/// Dense index of a position inside its owning [`GameGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PositionId(pub usize);

impl PositionId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A structural problem found by [`GameGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphViolation {
    Empty,
    StartOutOfRange {
        start: PositionId,
    },
    DanglingFollower {
        position: PositionId,
        follower: PositionId,
    },
    DuplicateFollower {
        position: PositionId,
        follower: PositionId,
    },
    LabelCount {
        expected: usize,
        found: usize,
    },
    /// Positions that lie on, or can only reach, a directed cycle.
    Cycle {
        positions: Vec<PositionId>,
    },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::Empty => write!(f, "graph has no positions"),
            GraphViolation::StartOutOfRange { start } => {
                write!(f, "start position {start} is out of range")
            }
            GraphViolation::DanglingFollower { position, follower } => {
                write!(f, "position {position} lists unknown follower {follower}")
            }
            GraphViolation::DuplicateFollower { position, follower } => {
                write!(f, "position {position} lists follower {follower} twice")
            }
            GraphViolation::LabelCount { expected, found } => {
                write!(f, "expected {expected} labels, found {found}")
            }
            GraphViolation::Cycle { positions } => {
                let ids: Vec<String> = positions.iter().map(ToString::to_string).collect();
                write!(f, "cycle detected among positions [{}]", ids.join(", "))
            }
        }
    }
}

/// Finite directed game graph. `followers[v]` is the ordered move list `F(v)`;
/// that order fixes every move index used elsewhere in the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameGraph {
    followers: Vec<Vec<PositionId>>,
    start: PositionId,
    #[serde(default)]
    labels: Vec<String>,
}

impl GameGraph {
    /// Builds a graph and rejects it if [`validate`](Self::validate) reports anything.
    pub fn new(followers: Vec<Vec<PositionId>>, start: PositionId, labels: Vec<String>) -> Result<Self> {
        let graph = Self::from_parts(followers, start, labels);
        let report = graph.validate();
        if let Some(cycle) = report.iter().find_map(|v| match v {
            GraphViolation::Cycle { positions } => positions.first().copied(),
            _ => None,
        }) {
            return Err(GameError::Cycle(cycle));
        }
        if !report.is_empty() {
            let msgs: Vec<String> = report.iter().map(ToString::to_string).collect();
            return Err(GameError::InvalidGraph(msgs.join("; ")));
        }
        Ok(graph)
    }

    /// Builds a graph without checking any invariant. Empty `labels` are
    /// replaced by the position indices.
    pub fn from_parts(followers: Vec<Vec<PositionId>>, start: PositionId, labels: Vec<String>) -> Self {
        let labels = if labels.is_empty() { (0..followers.len()).map(|i| i.to_string()).collect() } else { labels };
        GameGraph { followers, start, labels }
    }

    /// Convenience constructor from raw follower indices.
    pub fn from_indices(followers: Vec<Vec<usize>>, start: usize) -> Result<Self> {
        let followers = followers.into_iter().map(|fs| fs.into_iter().map(PositionId).collect()).collect();
        Self::new(followers, PositionId(start), Vec::new())
    }

    #[inline]
    pub fn position_count(&self) -> usize {
        self.followers.len()
    }

    #[inline]
    pub fn start(&self) -> PositionId {
        self.start
    }

    #[inline]
    pub fn followers(&self, v: PositionId) -> &[PositionId] {
        &self.followers[v.0]
    }

    #[inline]
    pub fn out_degree(&self, v: PositionId) -> usize {
        self.followers[v.0].len()
    }

    #[inline]
    pub fn is_terminal(&self, v: PositionId) -> bool {
        self.followers[v.0].is_empty()
    }

    pub fn label(&self, v: PositionId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn positions(&self) -> impl Iterator<Item = PositionId> + '_ {
        (0..self.followers.len()).map(PositionId)
    }

    /// Lists every violated invariant. An empty report means the graph is valid.
    pub fn validate(&self) -> Vec<GraphViolation> {
        let n = self.followers.len();
        let mut report = Vec::new();
        if n == 0 {
            report.push(GraphViolation::Empty);
            return report;
        }
        if self.start.0 >= n {
            report.push(GraphViolation::StartOutOfRange { start: self.start });
        }
        if self.labels.len() != n {
            report.push(GraphViolation::LabelCount { expected: n, found: self.labels.len() });
        }
        for (v, fs) in self.followers.iter().enumerate() {
            let mut seen = HashSet::with_capacity(fs.len());
            for &w in fs {
                if w.0 >= n {
                    report.push(GraphViolation::DanglingFollower { position: PositionId(v), follower: w });
                } else if !seen.insert(w) {
                    report.push(GraphViolation::DuplicateFollower { position: PositionId(v), follower: w });
                }
            }
        }
        let (_, stuck) = self.followers_first_order();
        if !stuck.is_empty() {
            report.push(GraphViolation::Cycle { positions: stuck });
        }
        report
    }

    /// Positions ordered so that every position comes after all of its followers.
    pub fn topological_order(&self) -> Result<Vec<PositionId>> {
        let (order, stuck) = self.followers_first_order();
        match stuck.first() {
            Some(&v) => Err(GameError::Cycle(v)),
            None => Ok(order),
        }
    }

    /// Positions with no moves.
    pub fn terminals(&self) -> BTreeSet<PositionId> {
        self.positions().filter(|&v| self.is_terminal(v)).collect()
    }

    // Kahn's algorithm on the reversed edges. Dangling follower indices are
    // ignored here; `validate` reports them separately.
    fn followers_first_order(&self) -> (Vec<PositionId>, Vec<PositionId>) {
        let n = self.followers.len();
        let mut pending = vec![0usize; n];
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, fs) in self.followers.iter().enumerate() {
            for w in fs.iter().filter(|w| w.0 < n) {
                pending[v] += 1;
                parents[w.0].push(v);
            }
        }
        let mut ready: VecDeque<usize> = (0..n).filter(|&v| pending[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(w) = ready.pop_front() {
            order.push(PositionId(w));
            for &v in &parents[w] {
                pending[v] -= 1;
                if pending[v] == 0 {
                    ready.push_back(v);
                }
            }
        }
        let stuck = (0..n).filter(|&v| pending[v] > 0).map(PositionId).collect();
        (order, stuck)
    }
}
