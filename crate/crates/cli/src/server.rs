//! HTTP play service under `/api/v1`.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex, PoisonError, RwLock};
use std::time::{Duration, Instant};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use noisy_games::games::{ChompVariant, CurvePoint};
use noisy_games::session::{HalfMove, Hint, SessionState};
use noisy_games::tables::{p_grid, sweep, SweepFamily};
use noisy_games::{BuiltinSpec, GameSpec, PlaySession, SessionError, SolutionListing};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::services::ServeDir;

use crate::args::ServeArgs;
use crate::commands::CliError;

/// Largest builtin accepted, in matrix entries summed over positions.
pub const MAX_CHANNEL_ENTRIES: u128 = 4_000_000;
pub const MAX_SWEEP_POINTS: usize = 10_001;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, code: "invalid_request", message: message.into() }
    }

    fn invalid_spec(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, code: "invalid_spec", message: message.into() }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let status = match e {
            SessionError::InvalidSpec(_) => StatusCode::BAD_REQUEST,
            SessionError::IllegalMove { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::SessionNotFound(_) => StatusCode::NOT_FOUND,
            SessionError::OutOfTurn(_) | SessionError::SessionFinished | SessionError::SessionBusy => {
                StatusCode::CONFLICT
            }
        };
        ApiError { status, code: e.code(), message: e.to_string() }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": { "code": self.code, "message": self.message } }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Slot {
    session: RwLock<PlaySession>,
    in_flight: AtomicBool,
    last_used: Mutex<Instant>,
}

impl Slot {
    fn touch(&self) {
        *self.last_used.lock().unwrap_or_else(PoisonError::into_inner) = Instant::now();
    }

    fn idle_for(&self, now: Instant) -> Duration {
        now.saturating_duration_since(*self.last_used.lock().unwrap_or_else(PoisonError::into_inner))
    }
}

/// Marks a session as being mutated until dropped.
pub struct InFlight(Arc<Slot>);

impl InFlight {
    fn begin(slot: Arc<Slot>) -> Result<Self, SessionError> {
        slot.in_flight
            .compare_exchange(false, true, Ordering::AcqRel, Ordering::Acquire)
            .map_err(|_| SessionError::SessionBusy)?;
        Ok(InFlight(slot))
    }
}

impl Drop for InFlight {
    fn drop(&mut self) {
        self.0.in_flight.store(false, Ordering::Release);
    }
}

/// In-memory sessions with idle eviction. Reads share a session; a second
/// concurrent mutation of the same session is rejected with `SessionBusy`.
pub struct SessionStore {
    slots: RwLock<HashMap<String, Arc<Slot>>>,
    idle: Duration,
}

impl SessionStore {
    pub fn new(idle: Duration) -> Self {
        SessionStore { slots: RwLock::new(HashMap::new()), idle }
    }

    pub fn len(&self) -> usize {
        self.slots.read().unwrap_or_else(PoisonError::into_inner).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert(&self, session: PlaySession) -> SessionState {
        let state = session.state();
        let slot = Slot {
            session: RwLock::new(session),
            in_flight: AtomicBool::new(false),
            last_used: Mutex::new(Instant::now()),
        };
        self.slots.write().unwrap_or_else(PoisonError::into_inner).insert(state.id.clone(), Arc::new(slot));
        state
    }

    fn slot(&self, id: &str) -> Result<Arc<Slot>, SessionError> {
        let now = Instant::now();
        let slot = self.slots.read().unwrap_or_else(PoisonError::into_inner).get(id).cloned();
        match slot {
            Some(slot) if slot.idle_for(now) <= self.idle => {
                slot.touch();
                Ok(slot)
            }
            Some(_) => {
                self.slots.write().unwrap_or_else(PoisonError::into_inner).remove(id);
                Err(SessionError::SessionNotFound(id.to_string()))
            }
            None => Err(SessionError::SessionNotFound(id.to_string())),
        }
    }

    pub fn read<T>(&self, id: &str, f: impl FnOnce(&PlaySession) -> T) -> Result<T, SessionError> {
        let slot = self.slot(id)?;
        let session = slot.session.read().unwrap_or_else(PoisonError::into_inner);
        Ok(f(&session))
    }

    pub fn mutate<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut PlaySession) -> Result<T, SessionError>,
    ) -> Result<T, SessionError> {
        let guard = self.hold(id)?;
        let mut session = guard.0.session.write().unwrap_or_else(PoisonError::into_inner);
        f(&mut session)
    }

    /// Claims the session for one mutation; `SessionBusy` if already claimed.
    pub fn hold(&self, id: &str) -> Result<InFlight, SessionError> {
        InFlight::begin(self.slot(id)?)
    }

    /// Drops sessions idle for longer than the eviction time.
    pub fn evict_idle(&self) -> usize {
        let now = Instant::now();
        let mut slots = self.slots.write().unwrap_or_else(PoisonError::into_inner);
        let before = slots.len();
        slots.retain(|_, slot| slot.idle_for(now) <= self.idle);
        before - slots.len()
    }
}

#[derive(Clone)]
pub struct AppState {
    pub sessions: Arc<SessionStore>,
}

impl AppState {
    pub fn new(idle: Duration) -> Self {
        AppState { sessions: Arc::new(SessionStore::new(idle)) }
    }
}

pub fn router(state: AppState) -> Router {
    let api = Router::new()
        .route("/solve", post(solve_handler))
        .route("/sweep", get(sweep_handler))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(submit_move))
        .route("/sessions/{id}/hint", get(get_hint))
        .fallback(|| async {
            ApiError { status: StatusCode::NOT_FOUND, code: "not_found", message: "no such endpoint".into() }
        });
    Router::new().nest("/api/v1", api).with_state(state)
}

/// Rough size of the channel a builtin would allocate.
fn channel_entries(spec: &BuiltinSpec) -> u128 {
    fn binomial(n: u128, k: u128) -> u128 {
        (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
    }
    match spec {
        BuiltinSpec::Nim1 { k, .. } => {
            let k = *k as u128;
            k.saturating_mul(k).saturating_mul(k + 1)
        }
        BuiltinSpec::Nim { piles, .. } => {
            let positions = piles.iter().fold(1u128, |acc, &c| acc.saturating_mul(c as u128 + 1));
            let moves = piles.iter().map(|&c| c as u128).sum::<u128>();
            positions.saturating_mul(moves).saturating_mul(moves)
        }
        BuiltinSpec::Chomp { n, m, .. } => {
            let (n, m) = (*n as u128, *m as u128);
            if n > 64 || m > 64 {
                return u128::MAX;
            }
            let cells = n * m;
            binomial(n + m, n).saturating_mul(cells).saturating_mul(cells)
        }
    }
}

fn parse_spec(value: &serde_json::Value) -> ApiResult<GameSpec> {
    let spec = GameSpec::from_json(&value.to_string()).map_err(|e| ApiError::invalid_spec(e.to_string()))?;
    if let GameSpec::Builtin(builtin) = &spec {
        if channel_entries(builtin) > MAX_CHANNEL_ENTRIES {
            return Err(ApiError::invalid_spec("game is too large for the service"));
        }
    }
    Ok(spec)
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError {
        status: StatusCode::INTERNAL_SERVER_ERROR,
        code: "internal",
        message: e.to_string(),
    })?
}

async fn solve_handler(body: Result<Json<serde_json::Value>, JsonRejection>) -> ApiResult<Json<SolutionListing>> {
    let spec = parse_spec(&body?.0)?;
    blocking(move || {
        let game = spec.resolve().map_err(|e| ApiError::invalid_spec(e.to_string()))?;
        let solved = game.solve().map_err(|e| ApiError::invalid_spec(e.to_string()))?;
        Ok(Json(game.listing(&solved)))
    })
    .await
}

#[derive(Debug, Deserialize)]
pub struct SweepQuery {
    game: String,
    k: Option<usize>,
    #[serde(alias = "rows")]
    n: Option<usize>,
    #[serde(alias = "cols")]
    m: Option<usize>,
    variant: Option<String>,
    points: Option<usize>,
}

async fn sweep_handler(query: Result<Query<SweepQuery>, QueryRejection>) -> ApiResult<Json<Vec<CurvePoint>>> {
    let q = query?.0;
    let need =
        |v: Option<usize>, name: &str| v.ok_or_else(|| ApiError::bad_request(format!("missing parameter '{name}'")));
    let (family, size) = match q.game.as_str() {
        "nim1" => {
            let k = need(q.k, "k")?;
            (SweepFamily::Nim1 { k }, BuiltinSpec::Nim1 { k, p: 0.0 })
        }
        "chomp" => {
            let (n, m) = (need(q.n, "n")?, need(q.m, "m")?);
            let variant: ChompVariant = q
                .variant
                .as_deref()
                .unwrap_or("n8")
                .parse()
                .map_err(|e: noisy_games::GameError| ApiError::bad_request(e.to_string()))?;
            (SweepFamily::Chomp { n, m, variant }, BuiltinSpec::Chomp { n, m, variant, p: 0.0 })
        }
        other => return Err(ApiError::bad_request(format!("unknown game '{other}', expected nim1 or chomp"))),
    };
    let points = q.points.unwrap_or(101);
    if !(2..=MAX_SWEEP_POINTS).contains(&points) {
        return Err(ApiError::bad_request(format!("points must be between 2 and {MAX_SWEEP_POINTS}")));
    }
    if channel_entries(&size).saturating_mul(points as u128) > 100 * MAX_CHANNEL_ENTRIES {
        return Err(ApiError::invalid_spec("sweep is too large for the service"));
    }
    blocking(move || {
        let grid = p_grid(points).map_err(|e| ApiError::bad_request(e.to_string()))?;
        sweep(family, &grid).map(Json).map_err(|e| ApiError::invalid_spec(e.to_string()))
    })
    .await
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    spec: serde_json::Value,
    seed: Option<u64>,
    #[serde(default = "yes")]
    human_first: bool,
}

fn yes() -> bool {
    true
}

async fn create_session(
    State(state): State<AppState>,
    body: Result<Json<CreateRequest>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<SessionState>)> {
    let request = body?.0;
    let spec = parse_spec(&request.spec)?;
    let seed = request.seed.unwrap_or_else(rand::random);
    let id = format!("{:032x}", rand::random::<u128>());
    let session = blocking(move || Ok(PlaySession::create(id, spec, seed, request.human_first)?)).await?;
    Ok((StatusCode::CREATED, Json(state.sessions.insert(session))))
}

async fn get_session(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<SessionState>> {
    Ok(Json(state.sessions.read(&id, PlaySession::state)?))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveRequest {
    sent: usize,
}

#[derive(Debug, Serialize)]
pub struct MoveResponse {
    human: HalfMove,
    #[serde(skip_serializing_if = "Option::is_none")]
    engine: Option<HalfMove>,
    state: SessionState,
}

async fn submit_move(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<Json<MoveResponse>> {
    let sent = body?.0.sent;
    let response = state.sessions.mutate(&id, |session| {
        let outcome = session.submit_move(sent)?;
        Ok(MoveResponse { human: outcome.human, engine: outcome.engine, state: session.state() })
    })?;
    Ok(Json(response))
}

async fn get_hint(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<Hint>> {
    Ok(Json(state.sessions.read(&id, PlaySession::hint)??))
}

/// Builds the full application: the API plus optional static assets.
pub fn app(state: AppState, assets: Option<PathBuf>) -> Router {
    let api = router(state);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(args: &ServeArgs) -> Result<(), CliError> {
    let state = AppState::new(Duration::from_secs(args.idle_minutes * 60));
    let sessions = Arc::clone(&state.sessions);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sessions.evict_idle();
        }
    });
    let addr: SocketAddr = format!("{}:{}", args.host, args.port)
        .parse()
        .map_err(|e| CliError::Usage(format!("bad listen address: {e}")))?;
    let listener = tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|e| CliError::Failed(format!("cannot listen on {addr}: {e}")))?;
    eprintln!("listening on http://{addr}");
    axum::serve(listener, app(state, args.assets.clone()))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| CliError::Failed(e.to_string()))
}

pub fn serve_blocking(args: &ServeArgs) -> Result<(), CliError> {
    tokio::runtime::Runtime::new()?.block_on(serve(args))
}
