//! HTTP sidecar answering one routing decision per request.
//!
//! * `POST /route` with `{"scores":[...], "metric":"gini"}` (metric optional)
//!   returns `{"arm":..,"difficulty":..,"metric":..,"latency_us":..}`.
//! * `GET /healthz` returns the SHA-256 of the loaded calibration files.
//!
//! Configs are loaded once at startup and never change, so handlers share
//! them without locking.

use std::collections::BTreeMap;
use std::future::Future;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use skewroute::io::{parse_calibration, CalibrationFileError};
use skewroute::router::route_scores;
use skewroute::{MetricKind, RouterConfig};
use tokio::net::TcpListener;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRequest {
    pub scores: Vec<f64>,
    #[serde(default)]
    pub metric: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteResponse {
    pub arm: String,
    pub difficulty: f64,
    pub metric: String,
    pub latency_us: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub metrics: Vec<String>,
}

#[derive(Debug)]
pub enum LoadError {
    Calibration { index: usize, source: CalibrationFileError },
    Empty,
    DuplicateMetric(MetricKind),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Calibration { index, source } => write!(f, "calibration file {}: {source}", index + 1),
            LoadError::Empty => f.write_str("no calibration file given"),
            LoadError::DuplicateMetric(k) => write!(f, "two calibration files both configure metric '{k}'"),
        }
    }
}

impl std::error::Error for LoadError {}

/// Router configs keyed by metric; the first file loaded is the default.
#[derive(Debug, Clone)]
pub struct LoadedConfigs {
    by_metric: BTreeMap<MetricKind, RouterConfig>,
    default: MetricKind,
    digest: String,
}

impl LoadedConfigs {
    /// Parses `calibration.json` contents. The digest covers the raw bytes in
    /// the order given, so it is stable for the same files.
    pub fn from_calibration_files<B: AsRef<[u8]>>(files: &[B]) -> Result<Self, LoadError> {
        let first = files.first().ok_or(LoadError::Empty)?;
        let mut hasher = Sha256::new();
        let mut by_metric = BTreeMap::new();
        for (index, bytes) in files.iter().enumerate() {
            let bytes = bytes.as_ref();
            hasher.update(bytes);
            let file = parse_calibration(bytes).map_err(|source| LoadError::Calibration { index, source })?;
            let kind = file.config.metric.kind;
            if by_metric.insert(kind, file.config).is_some() {
                return Err(LoadError::DuplicateMetric(kind));
            }
        }
        let default = parse_calibration(first.as_ref())
            .map(|f| f.config.metric.kind)
            .map_err(|source| LoadError::Calibration { index: 0, source })?;
        Ok(Self { by_metric, default, digest: format!("{:x}", hasher.finalize()) })
    }

    pub fn from_config(config: RouterConfig) -> Self {
        let bytes = serde_json::to_vec(&config).unwrap_or_default();
        let default = config.metric.kind;
        Self {
            by_metric: BTreeMap::from([(default, config)]),
            default,
            digest: format!("{:x}", Sha256::digest(&bytes)),
        }
    }

    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub fn default_config(&self) -> &RouterConfig {
        &self.by_metric[&self.default]
    }

    pub fn metrics(&self) -> impl Iterator<Item = MetricKind> + '_ {
        self.by_metric.keys().copied()
    }
}

/// Result of one `/route` call before it becomes an HTTP response.
#[derive(Debug, Clone, PartialEq)]
pub enum RouteOutcome {
    Routed(RouteResponse),
    BadRequest(String),
    UnknownMetric(String),
}

impl RouteOutcome {
    pub fn status(&self) -> StatusCode {
        match self {
            RouteOutcome::Routed(_) => StatusCode::OK,
            RouteOutcome::BadRequest(_) => StatusCode::BAD_REQUEST,
            RouteOutcome::UnknownMetric(_) => StatusCode::UNPROCESSABLE_ENTITY,
        }
    }
}

impl IntoResponse for RouteOutcome {
    fn into_response(self) -> Response {
        let status = self.status();
        match self {
            RouteOutcome::Routed(body) => (status, Json(body)).into_response(),
            RouteOutcome::BadRequest(error) | RouteOutcome::UnknownMetric(error) => {
                (status, Json(ErrorBody { error })).into_response()
            }
        }
    }
}

pub fn handle_route(configs: &LoadedConfigs, req: &RouteRequest) -> RouteOutcome {
    let started = Instant::now();
    let cfg = match &req.metric {
        None => configs.default_config(),
        Some(name) => {
            let Ok(kind) = name.parse::<MetricKind>() else {
                return RouteOutcome::UnknownMetric(format!("unknown metric '{name}'"));
            };
            match configs.by_metric.get(&kind) {
                Some(cfg) => cfg,
                None => return RouteOutcome::UnknownMetric(format!("no calibrated thresholds for metric '{name}'")),
            }
        }
    };
    match route_scores(&req.scores, cfg) {
        Ok(decision) => RouteOutcome::Routed(RouteResponse {
            arm: decision.arm_name,
            difficulty: decision.difficulty.value(),
            metric: decision.metric_kind.name().to_string(),
            latency_us: started.elapsed().as_micros() as u64,
        }),
        Err(e) => RouteOutcome::BadRequest(e.to_string()),
    }
}

/// Decodes a raw request body and routes it.
pub fn handle_route_body(configs: &LoadedConfigs, body: &[u8]) -> RouteOutcome {
    match serde_json::from_slice::<RouteRequest>(body) {
        Ok(req) => handle_route(configs, &req),
        Err(e) => RouteOutcome::BadRequest(format!("malformed request: {e}")),
    }
}

pub fn handle_health(configs: Option<&LoadedConfigs>) -> (StatusCode, Health) {
    match configs {
        Some(c) => (
            StatusCode::OK,
            Health {
                status: "ok".into(),
                config_sha256: Some(c.digest().to_string()),
                metrics: c.metrics().map(|k| k.name().to_string()).collect(),
            },
        ),
        None => (
            StatusCode::SERVICE_UNAVAILABLE,
            Health { status: "no config loaded".into(), config_sha256: None, metrics: Vec::new() },
        ),
    }
}

#[derive(Debug, Clone, Default)]
pub struct AppState {
    configs: Option<Arc<LoadedConfigs>>,
}

impl AppState {
    pub fn loaded(configs: LoadedConfigs) -> Self {
        Self { configs: Some(Arc::new(configs)) }
    }

    /// A server with nothing to route with; every route call answers 503.
    pub fn unloaded() -> Self {
        Self::default()
    }
}

async fn route(State(state): State<AppState>, body: Bytes) -> Response {
    match &state.configs {
        Some(c) => handle_route_body(c, &body).into_response(),
        None => (StatusCode::SERVICE_UNAVAILABLE, Json(ErrorBody { error: "no config loaded".into() })).into_response(),
    }
}

async fn healthz(State(state): State<AppState>) -> Response {
    let (status, body) = handle_health(state.configs.as_deref());
    (status, Json(body)).into_response()
}

pub fn app(state: AppState) -> Router {
    Router::new().route("/route", post(route)).route("/healthz", get(healthz)).with_state(state)
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve<F>(listener: TcpListener, state: AppState, shutdown: F) -> std::io::Result<()>
where
    F: Future<Output = ()> + Send + 'static,
{
    axum::serve(listener, app(state)).with_graceful_shutdown(shutdown).await
}

#[cfg(test)]
mod tests {
    use super::*;
    use skewroute::{Arm, MetricSpec};

    fn gini_configs() -> LoadedConfigs {
        LoadedConfigs::from_config(
            RouterConfig::new(MetricSpec::of(MetricKind::Gini), vec![-0.5], Arm::default_pair()).unwrap(),
        )
    }

    #[test]
    fn routes_like_the_library() {
        let c = gini_configs();
        let req = RouteRequest { scores: vec![0.9, 0.1], metric: None };
        let RouteOutcome::Routed(resp) = handle_route(&c, &req) else { panic!() };
        let offline = route_scores(&req.scores, c.default_config()).unwrap();
        assert_eq!(resp.arm, offline.arm_name);
        assert_eq!(resp.difficulty, offline.difficulty.value());
        assert_eq!(resp.metric, "gini");
    }

    #[test]
    fn error_statuses() {
        let c = gini_configs();
        assert_eq!(handle_route_body(&c, br#"{"scores":[]}"#).status(), StatusCode::BAD_REQUEST);
        assert_eq!(handle_route_body(&c, br#"{"scores":[0.5,-1]}"#).status(), StatusCode::BAD_REQUEST);
        assert_eq!(handle_route_body(&c, br#"{"scores":[0,0]}"#).status(), StatusCode::BAD_REQUEST);
        assert_eq!(handle_route_body(&c, b"not json").status(), StatusCode::BAD_REQUEST);
        assert_eq!(
            handle_route_body(&c, br#"{"scores":[1],"metric":"xyz"}"#).status(),
            StatusCode::UNPROCESSABLE_ENTITY
        );
        assert_eq!(
            handle_route_body(&c, br#"{"scores":[1],"metric":"entropy"}"#).status(),
            StatusCode::UNPROCESSABLE_ENTITY
        );
        assert_eq!(handle_route_body(&c, br#"{"scores":[1],"metric":"gini"}"#).status(), StatusCode::OK);
    }

    #[test]
    fn health_reports_digest_or_unavailable() {
        let c = gini_configs();
        let (status, body) = handle_health(Some(&c));
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body.config_sha256.as_deref(), Some(c.digest()));
        assert_eq!(handle_health(None).0, StatusCode::SERVICE_UNAVAILABLE);
    }
}
