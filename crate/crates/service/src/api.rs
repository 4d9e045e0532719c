//! Request and response bodies, and the error type every handler returns.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use containment::graph::parse_graph6;
use containment::solver::SolveError;
use containment::{FamilySpec, Graph};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::session::{MoveSet, Side, Variant};

/// A graph named either by family spec (`"petersen"`, `"cycle:5"`) or by a
/// graph6 string. Exactly one must be given.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphSource {
    pub family: Option<String>,
    pub graph6: Option<String>,
}

impl GraphSource {
    pub fn resolve(&self) -> Result<(String, Graph), ApiError> {
        match (&self.family, &self.graph6) {
            (Some(spec), None) => {
                let family: FamilySpec = spec
                    .parse()
                    .map_err(|e| ApiError::bad_request(format!("{e}")))?;
                let g = family
                    .generate()
                    .map_err(|e| ApiError::bad_request(format!("{e}")))?;
                Ok((spec.clone(), g))
            }
            (None, Some(text)) => {
                let g =
                    parse_graph6(text.trim()).map_err(|e| ApiError::bad_request(format!("{e}")))?;
                if !g.is_connected() {
                    return Err(ApiError::bad_request("graph is not connected"));
                }
                Ok((text.trim().to_string(), g))
            }
            _ => Err(ApiError::bad_request(
                "give exactly one of `family` and `graph6`",
            )),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CreateSession {
    #[serde(flatten)]
    pub graph: GraphSource,
    pub k: usize,
    #[serde(default = "pass")]
    pub variant: Variant,
    pub human_role: Side,
    #[serde(default)]
    pub hints: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveRequest {
    #[serde(flatten)]
    pub graph: GraphSource,
    pub k: usize,
    #[serde(default = "pass")]
    pub variant: Variant,
}

fn pass() -> Variant {
    Variant::Pass
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyInfo {
    pub name: &'static str,
    pub parameters: &'static str,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Value,
}

impl ApiError {
    pub fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "error": "bad_request", "message": message.into() }),
        }
    }

    pub fn not_found(what: impl Into<String>) -> ApiError {
        ApiError {
            status: StatusCode::NOT_FOUND,
            body: json!({ "error": "not_found", "message": what.into() }),
        }
    }

    pub fn illegal_move(message: impl Into<String>, legal: &MoveSet) -> ApiError {
        ApiError {
            status: StatusCode::CONFLICT,
            body: json!({ "error": "illegal_move", "message": message.into(), "legalMoves": legal }),
        }
    }

    pub fn internal(message: impl Into<String>) -> ApiError {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: json!({ "error": "internal", "message": message.into() }),
        }
    }
}

impl From<SolveError> for ApiError {
    fn from(e: SolveError) -> ApiError {
        match e {
            SolveError::CapExceeded { estimate, cap } => ApiError {
                status: StatusCode::PAYLOAD_TOO_LARGE,
                body: json!({
                    "error": "state_cap_exceeded",
                    "message": e.to_string(),
                    "estimate": estimate.to_string(),
                    "cap": cap,
                }),
            },
            other => ApiError::bad_request(other.to_string()),
        }
    }
}

impl From<axum::extract::rejection::JsonRejection> for ApiError {
    fn from(e: axum::extract::rejection::JsonRejection) -> ApiError {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}
