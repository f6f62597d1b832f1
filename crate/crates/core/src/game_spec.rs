//! Declarative game descriptions: a built-in family with parameters, or an
//! explicit graph with its channel matrices.
//!
//! ```json
//! {"family": "nim1", "k": 3, "p": 0.3}
//! {"family": "nim", "piles": [2, 2]}
//! {"family": "chomp", "n": 2, "m": 2, "variant": "n8", "p": 0.5}
//! {"graph": {"followers": [[], [0]], "start": 1}, "model": [[], [[1.0]]]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::games::{nim1_graph, nim1_model, nim_multi_graph, nim_multi_positions, ChompBoard, ChompVariant};
use crate::graph::{GameGraph, PositionId};
use crate::model::MoveErrorModel;
use crate::solver::{solve, PositionClass, SolvedGame};

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum BuiltinSpec {
    /// One-pile Nim with `k` chips over the Hamming channel.
    Nim1 { k: usize, p: f64 },
    /// Multi-pile Nim; the equiprobable channel, or the noiseless one when
    /// `equiprobable` is false.
    Nim {
        piles: Vec<usize>,
        #[serde(default = "default_true")]
        equiprobable: bool,
    },
    /// Chomp! on an `n`-row, `m`-column bar.
    Chomp {
        n: usize,
        m: usize,
        variant: ChompVariant,
        #[serde(default)]
        p: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub graph: GameGraph,
    pub model: MoveErrorModel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GameSpec {
    Builtin(BuiltinSpec),
    Explicit(ExplicitSpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawNim1 {
    family: String,
    k: usize,
    p: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawNim {
    family: String,
    piles: Vec<usize>,
    #[serde(default = "default_true")]
    equiprobable: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct RawChomp {
    family: String,
    n: usize,
    m: usize,
    variant: ChompVariant,
    #[serde(default)]
    p: f64,
}

/// How a position should be drawn by a client.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PositionView {
    Heap { chips: usize },
    Piles { piles: Vec<usize> },
    Chomp { rows: usize, cols: usize, heights: Vec<usize>, move_cells: Vec<(usize, usize)> },
    Node { label: String },
}

/// One row of a solution listing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositionListing {
    pub id: PositionId,
    pub label: String,
    pub value: f64,
    pub class: PositionClass,
    pub move_values: Vec<f64>,
    pub optimal_moves: Vec<usize>,
    pub move_labels: Vec<String>,
}

/// Every position of a solved game with display labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionListing {
    pub start: PositionId,
    pub start_value: f64,
    pub positions: Vec<PositionListing>,
}

impl SolutionListing {
    pub fn start_position(&self) -> &PositionListing {
        &self.positions[self.start.index()]
    }
}

#[derive(Debug, Clone)]
enum Layout {
    Heap,
    Piles(Vec<Vec<usize>>),
    Chomp(Box<ChompBoard>),
    Plain,
}

/// A validated graph and channel with display data for positions and moves.
#[derive(Debug, Clone)]
pub struct ResolvedGame {
    pub graph: GameGraph,
    pub model: MoveErrorModel,
    pub move_labels: Vec<Vec<String>>,
    layout: Layout,
}

impl ResolvedGame {
    pub fn view(&self, v: PositionId) -> PositionView {
        match &self.layout {
            Layout::Heap => PositionView::Heap { chips: v.index() },
            Layout::Piles(tuples) => PositionView::Piles { piles: tuples[v.index()].clone() },
            Layout::Chomp(board) => PositionView::Chomp {
                rows: board.rows(),
                cols: board.cols(),
                heights: board.position(v).heights().to_vec(),
                move_cells: board.move_cells(v).to_vec(),
            },
            Layout::Plain => PositionView::Node { label: self.graph.label(v).to_string() },
        }
    }

    pub fn move_label(&self, v: PositionId, index: usize) -> &str {
        &self.move_labels[v.index()][index]
    }

    pub fn solve(&self) -> Result<SolvedGame> {
        solve(&self.graph, &self.model)
    }

    /// `solved` must come from this game.
    pub fn listing(&self, solved: &SolvedGame) -> SolutionListing {
        let positions = self
            .graph
            .positions()
            .map(|v| {
                let s = solved.position(v);
                PositionListing {
                    id: v,
                    label: self.graph.label(v).to_string(),
                    value: s.value,
                    class: s.class,
                    move_values: s.move_values.clone(),
                    optimal_moves: s.optimal_moves.clone(),
                    move_labels: self.move_labels[v.index()].clone(),
                }
            })
            .collect();
        SolutionListing { start: solved.start(), start_value: solved.start_value(), positions }
    }
}

impl GameSpec {
    /// Parses a JSON spec. Errors carry the line and column of the problem.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| GameError::InvalidSpec(e.to_string()))?;
        let err = |e: serde_json::Error| GameError::InvalidSpec(e.to_string());
        // Each shape is re-read from the text so errors keep their position.
        let spec = match value.get("family").map(|f| f.as_str()) {
            None => GameSpec::Explicit(serde_json::from_str(text).map_err(err)?),
            Some(Some("nim1")) => {
                let raw: RawNim1 = serde_json::from_str(text).map_err(err)?;
                GameSpec::Builtin(BuiltinSpec::Nim1 { k: raw.k, p: raw.p })
            }
            Some(Some("nim")) => {
                let raw: RawNim = serde_json::from_str(text).map_err(err)?;
                GameSpec::Builtin(BuiltinSpec::Nim { piles: raw.piles, equiprobable: raw.equiprobable })
            }
            Some(Some("chomp")) => {
                let raw: RawChomp = serde_json::from_str(text).map_err(err)?;
                GameSpec::Builtin(BuiltinSpec::Chomp { n: raw.n, m: raw.m, variant: raw.variant, p: raw.p })
            }
            Some(other) => {
                return Err(GameError::InvalidSpec(format!(
                    "unknown family {}, expected nim1, nim or chomp",
                    other.map_or_else(|| value["family"].to_string(), |s| format!("'{s}'"))
                )))
            }
        };
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("game specs always serialize")
    }

    /// Builds and validates the graph and channel.
    pub fn resolve(&self) -> Result<ResolvedGame> {
        let invalid = |e: GameError| GameError::InvalidSpec(e.to_string());
        let (graph, model, move_labels, layout) = match self {
            GameSpec::Builtin(BuiltinSpec::Nim1 { k, p }) => {
                let graph = nim1_graph(*k);
                let model = nim1_model(*k, *p).map_err(invalid)?;
                let labels = graph.positions().map(|v| (0..v.index()).map(leave_label).collect()).collect();
                (graph, model, labels, Layout::Heap)
            }
            GameSpec::Builtin(BuiltinSpec::Nim { piles, equiprobable }) => {
                let graph = nim_multi_graph(piles).map_err(invalid)?;
                let tuples = nim_multi_positions(piles);
                let model =
                    if *equiprobable { MoveErrorModel::equiprobable(&graph) } else { MoveErrorModel::identity(&graph) };
                let labels = graph
                    .positions()
                    .map(|v| {
                        let from = &tuples[v.index()];
                        graph
                            .followers(v)
                            .iter()
                            .map(|u| {
                                let to = &tuples[u.index()];
                                let pile = (0..from.len()).find(|&i| from[i] != to[i]).unwrap_or(0);
                                format!("pile {}: leave {}", pile + 1, to[pile])
                            })
                            .collect()
                    })
                    .collect();
                (graph, model, labels, Layout::Piles(tuples))
            }
            GameSpec::Builtin(BuiltinSpec::Chomp { n, m, variant, p }) => {
                let board = ChompBoard::new(*n, *m).map_err(invalid)?;
                let model = board.model(*variant, *p).map_err(invalid)?;
                let graph = board.graph().clone();
                let labels = graph
                    .positions()
                    .map(|v| board.move_cells(v).iter().map(|(c, r)| format!("chomp at ({c},{r})")).collect())
                    .collect();
                (graph, model, labels, Layout::Chomp(Box::new(board)))
            }
            GameSpec::Explicit(ExplicitSpec { graph, model }) => {
                let report = graph.validate();
                if !report.is_empty() {
                    let msgs: Vec<String> = report.iter().map(ToString::to_string).collect();
                    return Err(GameError::InvalidSpec(msgs.join("; ")));
                }
                let labels = graph
                    .positions()
                    .map(|v| graph.followers(v).iter().map(|&u| format!("to {}", graph.label(u))).collect())
                    .collect();
                (graph.clone(), model.clone(), labels, Layout::Plain)
            }
        };
        let report = model.validate(&graph);
        if !report.is_empty() {
            let msgs: Vec<String> = report.iter().map(ToString::to_string).collect();
            return Err(GameError::InvalidSpec(msgs.join("; ")));
        }
        Ok(ResolvedGame { graph, model, move_labels, layout })
    }
}

fn leave_label(chips: usize) -> String {
    match chips {
        1 => "leave 1 chip".to_string(),
        n => format!("leave {n} chips"),
    }
}
