//! WebAssembly bindings for the browser demo. Every function takes and
//! returns JSON text so the page needs no generated type definitions.

use noisy_games::session::MoveOutcome;
use noisy_games::tables::{p_grid, sweep, SweepFamily};
use noisy_games::{BuiltinSpec, GameSpec, PlaySession};
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const MAX_POINTS: usize = 10_001;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Start value and optimal moves over `points` evenly spaced values of `p`.
pub fn sweep_json(spec: &str, points: usize) -> Result<String, String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must be between 2 and {MAX_POINTS}"));
    }
    let family = match GameSpec::from_json(spec).map_err(|e| e.to_string())? {
        GameSpec::Builtin(BuiltinSpec::Nim1 { k, .. }) => SweepFamily::Nim1 { k },
        GameSpec::Builtin(BuiltinSpec::Chomp { n, m, variant, .. }) => SweepFamily::Chomp { n, m, variant },
        _ => return Err("only nim1 and chomp games depend on p".into()),
    };
    let grid = p_grid(points).map_err(|e| e.to_string())?;
    sweep(family, &grid).map(|rows| to_json(&rows)).map_err(|e| e.to_string())
}

/// Full solution listing of a spec.
pub fn solve_json(spec: &str) -> Result<String, String> {
    let game = GameSpec::from_json(spec).and_then(|s| s.resolve()).map_err(|e| e.to_string())?;
    let solved = game.solve().map_err(|e| e.to_string())?;
    Ok(to_json(&game.listing(&solved)))
}

#[wasm_bindgen(js_name = sweep)]
pub fn sweep_js(spec: &str, points: usize) -> Result<String, JsError> {
    sweep_json(spec, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solve)]
pub fn solve_js(spec: &str) -> Result<String, JsError> {
    solve_json(spec).map_err(|e| JsError::new(&e))
}

/// A game against the engine, played entirely in the page.
#[wasm_bindgen]
pub struct Game {
    session: PlaySession,
}

#[derive(Serialize)]
struct Played<'a> {
    #[serde(flatten)]
    outcome: &'a MoveOutcome,
    state: noisy_games::session::SessionState,
}

impl Game {
    pub fn create(spec: &str, seed: u32, human_first: bool) -> Result<Game, String> {
        let spec = GameSpec::from_json(spec).map_err(|e| e.to_string())?;
        let session = PlaySession::create("local", spec, u64::from(seed), human_first).map_err(|e| e.to_string())?;
        Ok(Game { session })
    }

    pub fn play_json(&mut self, sent: usize) -> Result<String, String> {
        let outcome = self.session.submit_move(sent).map_err(|e| e.to_string())?;
        Ok(to_json(&Played { outcome: &outcome, state: self.session.state() }))
    }

    pub fn hint_json(&self) -> Result<String, String> {
        self.session.hint().map(|h| to_json(&h)).map_err(|e| e.to_string())
    }
}

#[wasm_bindgen]
impl Game {
    #[wasm_bindgen(constructor)]
    pub fn new(spec: &str, seed: u32, human_first: bool) -> Result<Game, JsError> {
        Game::create(spec, seed, human_first).map_err(|e| JsError::new(&e))
    }

    pub fn state(&self) -> String {
        to_json(&self.session.state())
    }

    /// Transmits move `sent`; the engine's reply, if any, is included.
    pub fn play(&mut self, sent: usize) -> Result<String, JsError> {
        self.play_json(sent).map_err(|e| JsError::new(&e))
    }

    pub fn hint(&self) -> Result<String, JsError> {
        self.hint_json().map_err(|e| JsError::new(&e))
    }
}
