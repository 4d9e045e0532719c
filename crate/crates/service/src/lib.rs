//! HTTP service over the containment solver: play sessions against the
//! solved strategies, and cached solves.
//!
//! | Method | Path | |
//! |---|---|---|
//! | `GET` | `/health` | liveness |
//! | `GET` | `/families` | graph families accepted by `family` fields |
//! | `POST` | `/solve` | summary and both strategy tables; `x-cache: hit\|miss` |
//! | `POST` | `/sessions` | start a game, `201` |
//! | `GET` | `/sessions/{id}` | current view |
//! | `POST` | `/sessions/{id}/moves` | human move, engine replies |

pub mod api;
pub mod cache;
pub mod session;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use containment::graph::to_graph6;
use containment::solver::DEFAULT_STATE_CAP;
use containment::{solve, Graph, SolverConfig};
use serde_json::json;
use uuid::Uuid;

use api::{ApiError, CreateSession, FamilyInfo, SolveRequest};
use cache::{CacheKey, DiskCache, SolveRecord, RECORD_VERSION};
use session::{Engine, Move, MoveError, Session, SessionOptions, SessionView};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub state_cap: u64,
    /// Where solve records persist; `None` keeps them in memory only.
    pub cache_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            state_cap: DEFAULT_STATE_CAP,
            cache_dir: None,
        }
    }
}

pub struct AppState {
    config: ServiceConfig,
    disk: Option<DiskCache>,
    engines: Mutex<HashMap<CacheKey, Arc<Engine>>>,
    bodies: Mutex<HashMap<CacheKey, Bytes>>,
    sessions: Mutex<HashMap<Uuid, Session>>,
}

impl AppState {
    pub fn new(config: ServiceConfig) -> std::io::Result<AppState> {
        let disk = config.cache_dir.as_ref().map(DiskCache::open).transpose()?;
        Ok(AppState {
            config,
            disk,
            engines: Mutex::default(),
            bodies: Mutex::default(),
            sessions: Mutex::default(),
        })
    }

    async fn engine(&self, key: &CacheKey, g: Graph) -> Result<Arc<Engine>, ApiError> {
        if let Some(e) = self.engines.lock().unwrap().get(key) {
            return Ok(e.clone());
        }
        let rules = key.variant.rules(key.k);
        let config = SolverConfig {
            state_cap: self.config.state_cap,
        };
        let engine =
            tokio::task::spawn_blocking(move || solve(&g, &rules, &config).map(Engine::new))
                .await
                .map_err(|e| ApiError::internal(e.to_string()))??;
        let engine = Arc::new(engine);
        self.engines
            .lock()
            .unwrap()
            .insert(key.clone(), engine.clone());
        Ok(engine)
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/families", get(families))
        .route("/solve", post(solve_handler))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/moves", post(post_move))
        .with_state(state)
}

/// Serves until ctrl-c.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let app = router(Arc::new(AppState::new(config)?));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn families() -> Json<Vec<FamilyInfo>> {
    Json(
        containment::FamilySpec::catalog()
            .into_iter()
            .map(|(name, parameters)| FamilyInfo { name, parameters })
            .collect(),
    )
}

async fn solve_handler(
    State(state): State<Arc<AppState>>,
    req: Result<Json<SolveRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(req) = req?;
    let (_, g) = req.graph.resolve()?;
    let key = CacheKey {
        graph6: to_graph6(&g),
        k: req.k,
        variant: req.variant,
    };
    let cached = state.bodies.lock().unwrap().get(&key).cloned();
    let (body, hit) = match cached {
        Some(body) => (body, true),
        None => {
            let (record, hit) = match state.disk.as_ref().and_then(|d| d.load(&key)) {
                Some(record) => (record, true),
                None => {
                    let engine = state.engine(&key, g).await?;
                    let record = SolveRecord {
                        version: RECORD_VERSION,
                        key: key.clone(),
                        summary: engine.result.summary(),
                        cop_strategy: engine.cops.clone(),
                        robber_strategy: engine.robber.clone(),
                    };
                    if let Some(disk) = &state.disk {
                        disk.store(&record)
                            .map_err(|e| ApiError::internal(e.to_string()))?;
                    }
                    (record, false)
                }
            };
            let body = Bytes::from(
                serde_json::to_vec(&record).map_err(|e| ApiError::internal(e.to_string()))?,
            );
            state.bodies.lock().unwrap().insert(key, body.clone());
            (body, hit)
        }
    };
    let mut response = (
        [(
            header::CONTENT_TYPE,
            HeaderValue::from_static("application/json"),
        )],
        body,
    )
        .into_response();
    response.headers_mut().insert(
        "x-cache",
        HeaderValue::from_static(if hit { "hit" } else { "miss" }),
    );
    Ok(response)
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    req: Result<Json<CreateSession>, JsonRejection>,
) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let Json(req) = req?;
    let (source, g) = req.graph.resolve()?;
    let key = CacheKey {
        graph6: to_graph6(&g),
        k: req.k,
        variant: req.variant,
    };
    let engine = state.engine(&key, g).await?;
    let options = SessionOptions {
        k: req.k,
        variant: req.variant,
        human_role: req.human_role,
        hints: req.hints,
    };
    let session = Session::new(source, options, engine);
    let view = session.view();
    state.sessions.lock().unwrap().insert(session.id, session);
    Ok((StatusCode::CREATED, Json(view)))
}

fn parse_id(id: &str) -> Result<Uuid, ApiError> {
    Uuid::parse_str(id).map_err(|_| ApiError::not_found(format!("no session {id}")))
}

async fn get_session(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SessionView>, ApiError> {
    let id = parse_id(&id)?;
    let sessions = state.sessions.lock().unwrap();
    let session = sessions
        .get(&id)
        .ok_or_else(|| ApiError::not_found(format!("no session {id}")))?;
    Ok(Json(session.view()))
}

async fn post_move(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    mv: Result<Json<Move>, JsonRejection>,
) -> Result<Json<SessionView>, ApiError> {
    let id = parse_id(&id)?;
    let mut sessions = state.sessions.lock().unwrap();
    let session = sessions
        .get_mut(&id)
        .ok_or_else(|| ApiError::not_found(format!("no session {id}")))?;
    let Json(mv) = mv?;
    match session.play(mv) {
        Ok(()) => Ok(Json(session.view())),
        Err(MoveError::Finished) => Err(ApiError::illegal_move(
            "the game is over",
            &session.legal_moves(),
        )),
        Err(MoveError::Illegal(why)) => Err(ApiError::illegal_move(why, &session.legal_moves())),
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/service.md")]
mod book_service {}
