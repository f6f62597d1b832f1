//! Combinatorial games played through a noisy channel.
//!
//! Each transmitted move may land on a different legal move according to a
//! per-position row-stochastic matrix. The crate builds game graphs and
//! channels for the standard families, solves them by backward induction,
//! cross-checks the solutions with seeded Monte-Carlo rollouts, regenerates
//! the one-pile Nim tables, and runs interactive play sessions.
//!
//! - `graph` - game digraphs and evaluation order
//! - `model` - move error matrices
//! - `solver` - win probabilities, optimal moves and P/N/O classes
//! - `games` - Nim and Chomp! constructors
//! - `montecarlo` - seeded rollouts
//! - `tables` - p-grids, sweeps, CSV, bundled reference values, conjecture scan
//! - `game_spec` - JSON game descriptions
//! - `session` - human-vs-engine play

pub mod error;
pub mod game_spec;
pub mod games;
pub mod graph;
pub mod model;
pub mod montecarlo;
pub mod session;
pub mod solver;
pub mod tables;

pub use error::{GameError, Result};
pub use game_spec::{
    BuiltinSpec, ExplicitSpec, GameSpec, PositionListing, PositionView, ResolvedGame, SolutionListing,
};
pub use graph::{GameGraph, GraphViolation, PositionId};
pub use model::{ModelViolation, MoveErrorModel, ROW_SUM_TOLERANCE};
pub use montecarlo::{estimate_win_probability, play_game, Player, SimulationReport, Strategy};
pub use session::{PlaySession, SessionError};
pub use solver::{
    fair_chance_hypotheses, move_values, solve, PositionClass, PositionSolution, SolvedGame, TIE_TOLERANCE,
};
