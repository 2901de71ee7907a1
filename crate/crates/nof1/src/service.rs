//! HTTP/JSON API over the same store operations as the command line.
//!
//! Errors are returned as `{code, message, path?}` with status 404 for a
//! missing trial, 500 for I/O failures and 400 otherwise.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::NaiveDate;
use nof1_core::interchange::to_canonical_value;
use nof1_core::{ComponentId, Design, MeasurementValue, TimeOfDay, Timestamp, Trial};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::error::StoreError;
use crate::ops::{self, Clock, RandomIds};
use crate::store::{Store, StoreLock};

struct AppState {
    store: Mutex<Store>,
    clock: Clock,
}

type Shared = Arc<AppState>;

pub struct ApiError(StoreError);

impl<E: Into<StoreError>> From<E> for ApiError {
    fn from(e: E) -> Self {
        ApiError(e.into())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match self.0.code() {
            "NO_TRIAL" | "NOT_RUNNING" => StatusCode::NOT_FOUND,
            "IO_ERROR" => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        (status, Json(self.0.body())).into_response()
    }
}

type ApiResult<T = Json<Value>> = Result<T, ApiError>;

/// Parses a request body ourselves so bad JSON gets the usual error body.
fn body<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, ApiError> {
    let bytes = if bytes.iter().all(u8::is_ascii_whitespace) { b"{}".as_slice() } else { bytes };
    serde_json::from_slice(bytes).map_err(|e| nof1_core::ParseError::Malformed(e.to_string()).into())
}

fn json(value: impl serde::Serialize) -> Json<Value> {
    Json(serde_json::to_value(value).expect("views serialize"))
}

fn trial_json(trial: &Trial) -> Json<Value> {
    Json(to_canonical_value(trial))
}

impl AppState {
    /// Runs `f` on the store after finishing a trial whose last day passed.
    fn with_store<T>(&self, f: impl FnOnce(&mut Store, &Clock) -> crate::Result<T>) -> ApiResult<T> {
        let mut store = self.store.lock().unwrap_or_else(|e| e.into_inner());
        let today = self.clock.today();
        store.transact(|s| Ok(ops::refresh(s, today)))?;
        Ok(f(&mut store, &self.clock)?)
    }
}

pub fn router(store: Store, clock: Clock) -> Router {
    let state = Arc::new(AppState { store: Mutex::new(store), clock });
    Router::new()
        .route("/library", get(library))
        .route("/trial", get(get_trial).post(create_trial).patch(patch_trial))
        .route("/trial/status", get(status))
        .route("/trial/start", post(start))
        .route("/trial/tasks", get(tasks))
        .route("/trial/checks", post(check))
        .route("/trial/logs", post(log))
        .route("/trial/summary/{measure_id}", get(summary))
        .route("/trial/export", get(export))
        .route("/trial/import", post(import))
        .route("/trial/restart", post(restart))
        .with_state(state)
}

/// Serves the API on `addr` until interrupted, holding the store lock.
pub fn serve_blocking(dir: PathBuf, clock: Clock, addr: SocketAddr) -> anyhow::Result<()> {
    let _lock = StoreLock::acquire(&dir)?;
    let store = Store::load(&dir)?;
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(store, clock))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

async fn library() -> Json<Value> {
    Json(serde_json::from_str(nof1_core::library::LIBRARY_DOCUMENT).expect("library parses"))
}

async fn get_trial(State(app): State<Shared>) -> ApiResult {
    app.with_store(|s, _| Ok(trial_json(ops::current(s)?)))
}

/// Body: a partial trial in the interchange vocabulary; `design` defaults
/// to withdrawal.
async fn create_trial(State(app): State<Shared>, bytes: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let patch: Value = body(&bytes)?;
    app.with_store(|s, _| {
        s.transact(|s| {
            ops::create_draft(s, Trial::draft(Design::Withdrawal))?;
            let draft = ops::patch_draft(s, &patch)?;
            Ok((StatusCode::CREATED, trial_json(&draft)))
        })
    })
}

async fn patch_trial(State(app): State<Shared>, bytes: Bytes) -> ApiResult {
    let patch: Value = body(&bytes)?;
    app.with_store(|s, _| s.transact(|s| Ok(trial_json(&ops::patch_draft(s, &patch)?))))
}

async fn status(State(app): State<Shared>) -> ApiResult {
    app.with_store(|s, clock| Ok(json(ops::status(s, clock.today())?)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StartRequest {
    #[serde(default, with = "nof1_core::time::opt_date_format")]
    date: Option<NaiveDate>,
}

async fn start(State(app): State<Shared>, bytes: Bytes) -> ApiResult {
    let req: StartRequest = body(&bytes)?;
    app.with_store(|s, clock| {
        let date = req.date.unwrap_or_else(|| clock.today());
        s.transact(|s| Ok(trial_json(&ops::start(s, date)?)))
    })
}

#[derive(Deserialize)]
struct DateQuery {
    date: Option<String>,
}

fn query_date(q: &DateQuery, clock: &Clock) -> Result<NaiveDate, StoreError> {
    match &q.date {
        Some(d) => nof1_core::time::parse_date(d).map_err(|e| nof1_core::ParseError::Malformed(e.to_string()).into()),
        None => Ok(clock.today()),
    }
}

async fn tasks(State(app): State<Shared>, Query(q): Query<DateQuery>) -> ApiResult {
    app.with_store(|s, clock| Ok(json(ops::tasks_on(s, query_date(&q, clock)?)?)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct CheckRequest {
    component_id: ComponentId,
    #[serde(default, with = "nof1_core::time::opt_date_format")]
    date: Option<NaiveDate>,
    time: TimeOfDay,
    #[serde(default = "yes")]
    completed: bool,
}

fn yes() -> bool {
    true
}

async fn check(State(app): State<Shared>, bytes: Bytes) -> ApiResult {
    let req: CheckRequest = body(&bytes)?;
    app.with_store(|s, clock| {
        let date = req.date.unwrap_or_else(|| clock.today());
        s.transact(|s| Ok(json(ops::check_task(s, &req.component_id, date, req.time, req.completed)?)))
    })
}

/// `value` is either a typed value (`{"type": "scale", "value": 3}`) or a
/// bare number or string interpreted against the measure's type.
#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
struct LogRequest {
    measure_id: String,
    timestamp: Option<Timestamp>,
    value: Value,
}

async fn log(State(app): State<Shared>, bytes: Bytes) -> ApiResult<(StatusCode, Json<Value>)> {
    let req: LogRequest = body(&bytes)?;
    app.with_store(|s, clock| {
        let trial = s.active_trial().filter(|t| t.stage == nof1_core::Stage::Running).ok_or(StoreError::NotRunning)?;
        let id = ops::resolve_measure(trial, &req.measure_id);
        let value = match &req.value {
            Value::Object(_) => serde_json::from_value::<MeasurementValue>(req.value.clone())
                .map_err(|e| nof1_core::ParseError::Malformed(e.to_string()))?,
            Value::String(raw) => ops::parse_value(trial, &id, raw)?,
            other => ops::parse_value(trial, &id, &other.to_string())?,
        };
        let at = req.timestamp.unwrap_or_else(|| clock.now());
        let point = s.transact(|s| ops::log(s, &id, at, value))?;
        let mut out = json(point);
        out.0["measureId"] = Value::String(id.0);
        Ok((StatusCode::CREATED, out))
    })
}

async fn summary(State(app): State<Shared>, Path(measure_id): Path<String>) -> ApiResult {
    app.with_store(|s, _| {
        let trial = ops::current(s)?;
        Ok(json(ops::summary(trial, &ops::resolve_measure(trial, &measure_id))?))
    })
}

async fn export(State(app): State<Shared>) -> ApiResult<Response> {
    app.with_store(|s, _| Ok(([(header::CONTENT_TYPE, "application/json")], ops::export(s)?).into_response()))
}

async fn import(State(app): State<Shared>, bytes: Bytes) -> ApiResult {
    let doc = String::from_utf8(bytes.to_vec()).map_err(|e| nof1_core::ParseError::Malformed(e.to_string()))?;
    app.with_store(|s, _| s.transact(|s| Ok(trial_json(&ops::import(s, &doc)?))))
}

async fn restart(State(app): State<Shared>) -> ApiResult {
    app.with_store(|s, _| s.transact(|s| Ok(trial_json(&ops::restart(s, &mut RandomIds)?))))
}
