// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! HTTP compile service for the live-preview playground.
//!
//! `POST /api/compile` takes a glyph program and returns its SVG rendering
//! with diagnostics. `GET /api/health` reports the version, and every other
//! `GET` is served from the static UI directory.
//!
//! Each compile runs on a blocking worker with its own evaluator and a
//! deadline, so requests share nothing.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use metaglyph::dsl::{compile, Diagnostic, EvalOptions, PreludeOnly};
use metaglyph_pipeline::{glyph_svg, SvgOptions};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest accepted `source`, in bytes.
pub const DEFAULT_MAX_SOURCE: usize = 256 * 1024;
pub const MAX_TIMEOUT_MS: u64 = 5000;
pub const DEFAULT_TIMEOUT_MS: u64 = 2000;

/// File name used for the program in diagnostics.
const SOURCE_NAME: &str = "playground.mpg";

#[derive(Clone, Debug)]
pub struct Config {
    pub max_source: usize,
    pub static_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_source: DEFAULT_MAX_SOURCE,
            static_dir: None,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CompileRequest {
    pub source: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub debug: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct DiagnosticJson {
    pub severity: String,
    pub message: String,
    pub line: u32,
    pub column: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl From<&Diagnostic> for DiagnosticJson {
    fn from(d: &Diagnostic) -> Self {
        DiagnosticJson {
            severity: d.severity.as_str().to_string(),
            message: d.message.clone(),
            line: d.line(),
            column: d.column(),
            file: d.file.clone(),
        }
    }
}

/// A top-level numeric assignment of the program and its final value.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct Parameter {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct CompileResponse {
    pub svg: Option<String>,
    pub diagnostics: Vec<DiagnosticJson>,
    pub elapsed_ms: u64,
    pub parameters: Vec<Parameter>,
}

#[derive(Debug, Serialize)]
struct ErrorBody {
    error: String,
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(ErrorBody { error: message.into() })).into_response()
}

/// Checks the request limits. The message is suitable for a 400 or 413
/// reply.
pub fn validate(req: &CompileRequest, config: &Config) -> Result<(), (StatusCode, String)> {
    if req.source.len() > config.max_source {
        return Err((
            StatusCode::PAYLOAD_TOO_LARGE,
            format!("source is {} bytes; the limit is {}", req.source.len(), config.max_source),
        ));
    }
    if let Some(t) = req.timeout_ms {
        if t == 0 || t > MAX_TIMEOUT_MS {
            return Err((
                StatusCode::BAD_REQUEST,
                format!("timeout_ms must be between 1 and {MAX_TIMEOUT_MS}"),
            ));
        }
    }
    if let Some((k, _)) = req.overrides.iter().find(|(_, v)| !v.is_finite()) {
        return Err((StatusCode::BAD_REQUEST, format!("override `{k}` is not finite")));
    }
    Ok(())
}

/// Compiles one request synchronously.
pub fn handle_compile(req: &CompileRequest) -> CompileResponse {
    let start = Instant::now();
    let timeout = Duration::from_millis(req.timeout_ms.unwrap_or(DEFAULT_TIMEOUT_MS));
    let options = EvalOptions {
        overrides: req.overrides.clone(),
        deadline: Some(start + timeout),
        ..Default::default()
    };
    let glyph = compile(&req.source, SOURCE_NAME, &PreludeOnly, &options);
    let svg = (!glyph.has_errors()).then(|| {
        let options = SvgOptions {
            debug: req.debug,
            ..Default::default()
        };
        glyph_svg(&glyph.outline, &glyph.strokes, &options)
    });
    CompileResponse {
        svg,
        diagnostics: glyph.diagnostics.iter().map(DiagnosticJson::from).collect(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        parameters: glyph
            .parameters
            .into_iter()
            .map(|(name, value)| Parameter { name, value })
            .collect(),
    }
}

fn is_json(value: &str) -> bool {
    let essence = value.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
    essence == "application/json" || (essence.starts_with("application/") && essence.ends_with("+json"))
}

fn accepts_json(headers: &HeaderMap) -> bool {
    let Some(accept) = headers.get(header::ACCEPT).and_then(|v| v.to_str().ok()) else {
        return true;
    };
    accept.split(',').any(|item| {
        let t = item.split(';').next().unwrap_or("").trim().to_ascii_lowercase();
        t == "*/*" || t == "application/*" || is_json(&t)
    })
}

async fn compile_handler(State(config): State<Config>, headers: HeaderMap, body: Bytes) -> Response {
    if !accepts_json(&headers) {
        return error(StatusCode::NOT_ACCEPTABLE, "responses are application/json");
    }
    if let Some(ct) = headers.get(header::CONTENT_TYPE) {
        if !ct.to_str().map(is_json).unwrap_or(false) {
            return error(StatusCode::UNSUPPORTED_MEDIA_TYPE, "request body must be application/json");
        }
    }
    let req: CompileRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed request: {e}")),
    };
    if let Err((status, message)) = validate(&req, &config) {
        return error(status, message);
    }
    match tokio::task::spawn_blocking(move || handle_compile(&req)).await {
        Ok(resp) => {
            let status = if resp.svg.is_some() {
                StatusCode::OK
            } else {
                StatusCode::UNPROCESSABLE_ENTITY
            };
            (status, Json(resp)).into_response()
        }
        Err(e) => {
            log::error!("compile worker failed: {e}");
            error(StatusCode::INTERNAL_SERVER_ERROR, "internal error")
        }
    }
}

#[derive(Serialize)]
struct Health {
    status: &'static str,
    version: &'static str,
}

async fn health() -> Json<Health> {
    Json(Health {
        status: "ok",
        version: VERSION,
    })
}

const PLACEHOLDER: &str = "<!doctype html>\n<title>metaglyph</title>\n<p>The playground UI is not installed. \
POST glyph programs to <code>/api/compile</code>.</p>\n";

async fn placeholder() -> Html<&'static str> {
    Html(PLACEHOLDER)
}

/// Request bodies carry JSON-escaped source, which can be up to six times
/// the raw size.
fn body_limit(max_source: usize) -> usize {
    max_source.saturating_mul(6).saturating_add(64 * 1024)
}

pub fn router(config: Config) -> Router {
    let api = Router::new()
        .route("/api/compile", post(compile_handler))
        .route("/api/health", get(health))
        .layer(DefaultBodyLimit::max(body_limit(config.max_source)));
    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true)),
        None => api.route("/", get(placeholder)),
    };
    app.with_state(config)
}

/// Binds `addr` and serves until the process ends.
pub async fn serve(addr: SocketAddr, config: Config) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(config)).await
}
