//! Interactive play against the solved engine through the noisy channel.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game_spec::{GameSpec, PositionView, ResolvedGame};
use crate::graph::PositionId;
use crate::montecarlo::transmit;
use crate::solver::{solve, PositionClass, SolvedGame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Seat {
    Human,
    Engine,
}

impl Seat {
    pub fn other(self) -> Seat {
        match self {
            Seat::Human => Seat::Engine,
            Seat::Engine => Seat::Human,
        }
    }
}

impl fmt::Display for Seat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Seat::Human => "human",
            Seat::Engine => "engine",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum SessionStatus {
    Live,
    Finished { winner: Seat },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("{0}")]
    InvalidSpec(String),
    #[error("move {sent} is not legal here ({available} moves available)")]
    IllegalMove { sent: usize, available: usize },
    #[error("it is not the {0}'s turn")]
    OutOfTurn(Seat),
    #[error("the session is finished")]
    SessionFinished,
    #[error("no session with id '{0}'")]
    SessionNotFound(String),
    #[error("another request is already being processed for this session")]
    SessionBusy,
}

impl SessionError {
    /// Machine-readable error code used by the HTTP API.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::InvalidSpec(_) => "invalid_spec",
            SessionError::IllegalMove { .. } => "illegal_move",
            SessionError::OutOfTurn(_) => "out_of_turn",
            SessionError::SessionFinished => "session_finished",
            SessionError::SessionNotFound(_) => "session_not_found",
            SessionError::SessionBusy => "session_busy",
        }
    }
}

/// One transmitted move and where it landed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfMove {
    pub player: Seat,
    pub position: PositionId,
    pub sent: usize,
    pub sent_label: String,
    pub landed: usize,
    pub landed_label: String,
    pub resulting: PositionId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hint {
    pub move_values: Vec<f64>,
    pub optimal_moves: Vec<usize>,
    pub move_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveOutcome {
    pub human: HalfMove,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<HalfMove>,
}

/// Serializable snapshot of a session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub id: String,
    pub spec: GameSpec,
    pub seed: u64,
    pub current: PositionId,
    pub position: PositionView,
    pub position_value: f64,
    pub position_class: PositionClass,
    pub to_move: Seat,
    pub move_labels: Vec<String>,
    pub status: SessionStatus,
    pub history: Vec<HalfMove>,
}

/// A live game between a human and the solved engine.
#[derive(Debug, Clone)]
pub struct PlaySession {
    id: String,
    spec: GameSpec,
    game: ResolvedGame,
    solved: SolvedGame,
    current: PositionId,
    to_move: Seat,
    seed: u64,
    history: Vec<HalfMove>,
    status: SessionStatus,
    rng: ChaCha8Rng,
}

impl PlaySession {
    /// Resolves and solves `spec`. When the engine moves first it plays its
    /// opening move immediately.
    pub fn create(id: impl Into<String>, spec: GameSpec, seed: u64, human_first: bool) -> Result<Self, SessionError> {
        let game = spec.resolve().map_err(|e| SessionError::InvalidSpec(e.to_string()))?;
        let solved = solve(&game.graph, &game.model).map_err(|e| SessionError::InvalidSpec(e.to_string()))?;
        let current = game.graph.start();
        let mut session = PlaySession {
            id: id.into(),
            spec,
            game,
            solved,
            current,
            to_move: if human_first { Seat::Human } else { Seat::Engine },
            seed,
            history: Vec::new(),
            status: SessionStatus::Live,
            rng: ChaCha8Rng::seed_from_u64(seed),
        };
        session.update_status();
        if session.status == SessionStatus::Live && session.to_move == Seat::Engine {
            session.engine_move();
        }
        Ok(session)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn current(&self) -> PositionId {
        self.current
    }

    pub fn to_move(&self) -> Seat {
        self.to_move
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn history(&self) -> &[HalfMove] {
        &self.history
    }

    pub fn solved(&self) -> &SolvedGame {
        &self.solved
    }

    pub fn game(&self) -> &ResolvedGame {
        &self.game
    }

    /// Human transmits `sent`; if the game continues the engine replies
    /// through the same channel before this returns.
    pub fn submit_move(&mut self, sent: usize) -> Result<MoveOutcome, SessionError> {
        if let SessionStatus::Finished { .. } = self.status {
            return Err(SessionError::SessionFinished);
        }
        if self.to_move != Seat::Human {
            return Err(SessionError::OutOfTurn(Seat::Human));
        }
        let available = self.game.graph.out_degree(self.current);
        if sent >= available {
            return Err(SessionError::IllegalMove { sent, available });
        }
        let human = self.play(sent);
        let engine = match self.status {
            SessionStatus::Live => Some(self.engine_move()),
            SessionStatus::Finished { .. } => None,
        };
        Ok(MoveOutcome { human, engine })
    }

    /// Per-move win probabilities at the current position.
    pub fn hint(&self) -> Result<Hint, SessionError> {
        if let SessionStatus::Finished { .. } = self.status {
            return Err(SessionError::SessionFinished);
        }
        let solution = self.solved.position(self.current);
        Ok(Hint {
            move_values: solution.move_values.clone(),
            optimal_moves: solution.optimal_moves.clone(),
            move_labels: self.game.move_labels[self.current.index()].clone(),
        })
    }

    pub fn state(&self) -> SessionState {
        let solution = self.solved.position(self.current);
        SessionState {
            id: self.id.clone(),
            spec: self.spec.clone(),
            seed: self.seed,
            current: self.current,
            position: self.game.view(self.current),
            position_value: solution.value,
            position_class: solution.class,
            to_move: self.to_move,
            move_labels: self.game.move_labels[self.current.index()].clone(),
            status: self.status,
            history: self.history.clone(),
        }
    }

    /// Replays the landed moves from the start and checks that they reach
    /// the current position.
    pub fn replay_matches(&self) -> bool {
        let graph = &self.game.graph;
        let mut v = graph.start();
        for step in &self.history {
            if step.position != v || step.landed >= graph.out_degree(v) {
                return false;
            }
            v = graph.followers(v)[step.landed];
            if v != step.resulting {
                return false;
            }
        }
        v == self.current
    }

    fn engine_move(&mut self) -> HalfMove {
        let sent = self.solved.position(self.current).canonical_move().expect("engine only moves from live positions");
        self.play(sent)
    }

    fn play(&mut self, sent: usize) -> HalfMove {
        let position = self.current;
        let (landed, resulting) = transmit(&self.game.graph, &self.game.model, position, sent, &mut self.rng);
        let half = HalfMove {
            player: self.to_move,
            position,
            sent,
            sent_label: self.game.move_label(position, sent).to_string(),
            landed,
            landed_label: self.game.move_label(position, landed).to_string(),
            resulting,
        };
        self.history.push(half.clone());
        self.current = resulting;
        self.to_move = self.to_move.other();
        self.update_status();
        half
    }

    fn update_status(&mut self) {
        if self.game.graph.is_terminal(self.current) {
            // the player who faces a terminal position loses
            self.status = SessionStatus::Finished { winner: self.to_move.other() };
        }
    }
}
