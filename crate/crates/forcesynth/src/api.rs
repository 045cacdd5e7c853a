//! JSON session API.
//!
//! | route | effect |
//! |---|---|
//! | `POST /sessions` | open a session, synthesizing when no supervisor is given |
//! | `GET /sessions/{id}` | current state and control decision |
//! | `POST /sessions/{id}/step` | fire an event |
//! | `POST /sessions/{id}/undo` | drop the last event |
//! | `GET /models/{id}/graph` | DOT of the session's supervisor, or `?automaton=plant` |
//!
//! Errors carry an `error_kind` field.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use forcesynth_core::{synthesize, Automaton, Error as CoreError, Mode, StateSet};
use serde::{Deserialize, Serialize};

use crate::dot::to_dot;
use crate::model::{Kind, ModelFile};
use crate::session::{Session, SessionView};

#[derive(Default)]
struct Inner {
    next: u64,
    sessions: BTreeMap<u64, Arc<Mutex<Session>>>,
}

/// Shared server state. Each session sits behind its own lock, so steps on
/// one session are serialized while different sessions proceed in parallel.
#[derive(Clone, Default)]
pub struct AppState {
    inner: Arc<Mutex<Inner>>,
    synthesis: Arc<Mutex<()>>,
}

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    pub error_kind: &'static str,
    pub message: String,
}

impl ApiError {
    fn new(status: StatusCode, error_kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            error_kind,
            message: message.into(),
        }
    }

    fn unknown_session(id: u64) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown_session", format!("no session {id}"))
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let (status, kind) = match &e {
            CoreError::DisabledBySupervisor(_) => (StatusCode::CONFLICT, "disabled_by_supervisor"),
            CoreError::NotEligibleInPlant(_) => (StatusCode::CONFLICT, "not_eligible_in_plant"),
            CoreError::UnknownEvent(_) => (StatusCode::BAD_REQUEST, "unknown_event"),
            CoreError::EmptySupervisor => (StatusCode::UNPROCESSABLE_ENTITY, "empty_supervisor"),
            CoreError::NotSubautomaton(_) => (StatusCode::BAD_REQUEST, "not_subautomaton"),
            _ => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        Self::new(status, kind, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self)).into_response()
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateSession {
    /// Plants and specifications; may also carry the supervisor.
    pub model: ModelFile,
    /// A separate supervisor model. Takes precedence over one in `model`.
    #[serde(default)]
    pub supervisor: Option<ModelFile>,
    #[serde(default)]
    pub mode: Option<String>,
    #[serde(default)]
    pub plantify_specs: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Created {
    pub id: u64,
    pub model_id: u64,
}

#[derive(Debug, Deserialize)]
pub struct StepRequest {
    pub event: String,
}

#[derive(Debug, Deserialize)]
pub struct GraphQuery {
    #[serde(default)]
    pub automaton: Option<String>,
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "fc" => Some(Mode::ForciblyControllable),
        "classic" => Some(Mode::Classic),
        "forcible" => Some(Mode::Forcible),
        _ => None,
    }
}

fn bad_model(e: impl ToString) -> ApiError {
    ApiError::new(StatusCode::BAD_REQUEST, "invalid_model", e.to_string())
}

fn supervisor_of(m: &ModelFile) -> Result<Option<(Automaton, Option<StateSet>)>, ApiError> {
    let loaded = m.load().map_err(bad_model)?;
    Ok(loaded
        .into_iter()
        .find(|l| l.kind == Kind::Supervisor)
        .map(|l| (l.automaton, l.forcing)))
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(show))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/undo", post(undo))
        .route("/models/{id}/graph", get(graph))
        .with_state(state)
}

impl AppState {
    fn get(&self, id: u64) -> Result<Arc<Mutex<Session>>, ApiError> {
        let inner = self.inner.lock().expect("state lock");
        inner
            .sessions
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }
}

fn view(session: &Session) -> Result<Json<SessionView>, ApiError> {
    Ok(Json(session.view()?))
}

async fn create(
    State(state): State<AppState>,
    Json(req): Json<CreateSession>,
) -> Result<(StatusCode, Json<Created>), ApiError> {
    let mode = match req.mode.as_deref() {
        None => Mode::ForciblyControllable,
        Some(s) => parse_mode(s).ok_or_else(|| {
            ApiError::new(StatusCode::BAD_REQUEST, "invalid_mode", format!("unknown mode `{s}`"))
        })?,
    };
    let plant = req.model.composed_plant(req.plantify_specs).map_err(bad_model)?;
    let given = match &req.supervisor {
        Some(m) => supervisor_of(m)?
            .ok_or_else(|| bad_model("supervisor model has no supervisor"))
            .map(Some)?,
        None => supervisor_of(&req.model)?,
    };
    let (sup, forcing) = match given {
        Some(s) => s,
        None => {
            let _one_at_a_time = state.synthesis.lock().expect("synthesis lock");
            let r = synthesize(&plant, mode);
            (r.supervisor, Some(r.forcing_states))
        }
    };
    let session = Session::new(plant, sup, forcing)?;
    let mut inner = state.inner.lock().expect("state lock");
    inner.next += 1;
    let id = inner.next;
    inner.sessions.insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(Created { id, model_id: id })))
}

async fn show(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Json<SessionView>, ApiError> {
    let s = state.get(id)?;
    let s = s.lock().expect("session lock");
    view(&s)
}

async fn step(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    Json(req): Json<StepRequest>,
) -> Result<Json<SessionView>, ApiError> {
    let s = state.get(id)?;
    let mut s = s.lock().expect("session lock");
    s.step(&req.event)?;
    view(&s)
}

async fn undo(State(state): State<AppState>, Path(id): Path<u64>) -> Result<Json<SessionView>, ApiError> {
    let s = state.get(id)?;
    let mut s = s.lock().expect("session lock");
    if !s.undo()? {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "nothing_to_undo",
            "session is at its initial state",
        ));
    }
    view(&s)
}

async fn graph(
    State(state): State<AppState>,
    Path(id): Path<u64>,
    Query(q): Query<GraphQuery>,
) -> Result<Response, ApiError> {
    let s = state.get(id)?;
    let s = s.lock().expect("session lock");
    let dot = match q.automaton.as_deref() {
        None | Some("supervisor") => to_dot(s.supervisor(), s.forcing()),
        Some("plant") => to_dot(s.plant(), None),
        Some(other) => {
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                "invalid_query",
                format!("unknown automaton `{other}`"),
            ))
        }
    };
    Ok(([(header::CONTENT_TYPE, "text/vnd.graphviz")], dot).into_response())
}

/// Serves the API until the process is stopped.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router(AppState::default())).await
}
