//! Seeded rollouts through the sampled channel, used as an independent
//! check on solver values.
//!
//! Every rollout owns a ChaCha8 generator seeded with the run seed and
//! switched to the stream numbered by the rollout index, so results do not
//! depend on scheduling or thread count.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GameError, Result};
use crate::graph::{GameGraph, PositionId};
use crate::model::MoveErrorModel;
use crate::solver::{solve, SolvedGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "I")]
    First,
    #[serde(rename = "II")]
    Second,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::First => "I",
            Player::Second => "II",
        })
    }
}

/// How a player picks the move to transmit.
#[derive(Debug, Clone)]
pub enum Strategy<'a> {
    /// Smallest optimal move of a solved game.
    Optimal(&'a SolvedGame),
    UniformRandom,
    /// One move index per position; entries at terminals are ignored.
    FixedTable(Vec<usize>),
}

impl<'a> Strategy<'a> {
    pub fn fixed_table(graph: &GameGraph, table: Vec<usize>) -> Result<Self> {
        if table.len() != graph.position_count() {
            return Err(GameError::InvalidParameters(format!(
                "strategy table has {} entries for {} positions",
                table.len(),
                graph.position_count()
            )));
        }
        for v in graph.positions() {
            if !graph.is_terminal(v) && table[v.index()] >= graph.out_degree(v) {
                return Err(GameError::InvalidParameters(format!(
                    "strategy move {} is not legal at {v}",
                    table[v.index()]
                )));
            }
        }
        Ok(Strategy::FixedTable(table))
    }

    fn choose<R: Rng>(&self, graph: &GameGraph, v: PositionId, rng: &mut R) -> usize {
        match self {
            Strategy::Optimal(solved) => {
                solved.position(v).canonical_move().expect("non-terminal positions have an optimal move")
            }
            Strategy::UniformRandom => rng.random_range(0..graph.out_degree(v)),
            Strategy::FixedTable(table) => table[v.index()],
        }
    }
}

/// Inverse-CDF sampling of a probability row with a uniform draw in `[0, 1)`.
/// Entries with zero probability are never returned.
pub fn sample_index(row: &[f64], draw: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &prob) in row.iter().enumerate() {
        if prob <= 0.0 {
            continue;
        }
        cumulative += prob;
        last_positive = i;
        if draw < cumulative {
            return i;
        }
    }
    // rounding left the row sum just under the draw
    last_positive
}

/// Move that lands when `sent` is transmitted from `v`.
pub fn sample_received_move(model: &MoveErrorModel, v: PositionId, sent: usize, draw: f64) -> usize {
    sample_index(model.row(v, sent), draw)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Turn {
    pub player: Player,
    pub position: PositionId,
    pub sent: usize,
    pub landed: usize,
    pub next: PositionId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub winner: Player,
    pub transcript: Vec<Turn>,
}

/// Transmits `sent` from `v`, returning the landed move index and position.
pub fn transmit<R: Rng>(
    graph: &GameGraph,
    model: &MoveErrorModel,
    v: PositionId,
    sent: usize,
    rng: &mut R,
) -> (usize, PositionId) {
    let landed = sample_received_move(model, v, sent, rng.random::<f64>());
    (landed, graph.followers(v)[landed])
}

fn play_with_rng<R: Rng>(
    graph: &GameGraph,
    model: &MoveErrorModel,
    first: &Strategy<'_>,
    second: &Strategy<'_>,
    rng: &mut R,
) -> GameRecord {
    let mut v = graph.start();
    let mut to_move = Player::First;
    let mut transcript = Vec::new();
    while !graph.is_terminal(v) {
        let strategy = match to_move {
            Player::First => first,
            Player::Second => second,
        };
        let sent = strategy.choose(graph, v, rng);
        let (landed, next) = transmit(graph, model, v, sent, rng);
        transcript.push(Turn { player: to_move, position: v, sent, landed, next });
        v = next;
        to_move = to_move.other();
    }
    // whoever faces the terminal position loses
    GameRecord { winner: to_move.other(), transcript }
}

fn rollout_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Plays one game from the start position; identical seeds give identical records.
pub fn play_game(
    graph: &GameGraph,
    model: &MoveErrorModel,
    first: &Strategy<'_>,
    second: &Strategy<'_>,
    seed: u64,
) -> GameRecord {
    play_with_rng(graph, model, first, second, &mut rollout_rng(seed, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub games_played: u64,
    pub first_player_wins: u64,
    pub estimate: f64,
    pub standard_error: f64,
}

impl SimulationReport {
    pub fn from_counts(games_played: u64, first_player_wins: u64) -> Self {
        let (estimate, standard_error) = if games_played == 0 {
            (0.0, 0.0)
        } else {
            let n = games_played as f64;
            let est = first_player_wins as f64 / n;
            (est, (est * (1.0 - est) / n).sqrt())
        };
        SimulationReport { games_played, first_player_wins, estimate, standard_error }
    }

    pub fn merge(&self, other: &SimulationReport) -> Self {
        Self::from_counts(self.games_played + other.games_played, self.first_player_wins + other.first_player_wins)
    }

    /// `|estimate - expected|` in units of the standard error. A zero
    /// standard error counts as exact agreement only on an exact match.
    pub fn z_score(&self, expected: f64) -> f64 {
        let delta = (self.estimate - expected).abs();
        if self.standard_error > 0.0 {
            delta / self.standard_error
        } else if delta <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Plays `games` seeded rollouts between two strategies.
pub fn simulate(
    graph: &GameGraph,
    model: &MoveErrorModel,
    first: &Strategy<'_>,
    second: &Strategy<'_>,
    games: u64,
    seed: u64,
) -> Result<SimulationReport> {
    if games == 0 {
        return Err(GameError::InvalidParameters("at least one game is required".into()));
    }
    model.check_dimensions(graph)?;
    let first_wins = |index: u64| {
        let record = play_with_rng(graph, model, first, second, &mut rollout_rng(seed, index));
        u64::from(record.winner == Player::First)
    };
    #[cfg(feature = "parallel")]
    let wins: u64 = {
        use rayon::prelude::*;
        (0..games).into_par_iter().map(first_wins).sum()
    };
    #[cfg(not(feature = "parallel"))]
    let wins: u64 = (0..games).map(first_wins).sum();
    Ok(SimulationReport::from_counts(games, wins))
}

/// Estimates the start value with both players following the solver's
/// canonical optimal moves.
pub fn estimate_win_probability(
    graph: &GameGraph,
    model: &MoveErrorModel,
    games: u64,
    seed: u64,
) -> Result<SimulationReport> {
    let solved = solve(graph, model)?;
    let optimal = Strategy::Optimal(&solved);
    simulate(graph, model, &optimal, &optimal, games, seed)
}
