use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use skewroute::io::CalibrationFile;
use skewroute::router::{calibrate, route_scores};
use skewroute::{Arm, MetricKind, MetricSpec, RouterConfig};
use skewroute_service::{app, AppState, LoadedConfigs, RouteResponse};
use tower::ServiceExt;

fn calibration_json(kind: MetricKind, values: &[f64]) -> Vec<u8> {
    let report = calibrate(values, &[0.5, 0.5]).unwrap();
    let config = RouterConfig::new(MetricSpec::of(kind), report.thresholds.clone(), Arm::default_pair()).unwrap();
    CalibrationFile { config, report }.to_json_pretty().unwrap().into_bytes()
}

fn two_metric_state() -> (AppState, LoadedConfigs) {
    let files = [
        calibration_json(MetricKind::Gini, &[-0.9, -0.5, -0.1]),
        calibration_json(MetricKind::Entropy, &[0.5, 1.0, 2.0]),
    ];
    let loaded = LoadedConfigs::from_calibration_files(&files).unwrap();
    (AppState::loaded(loaded.clone()), loaded)
}

async fn call(state: AppState, method: &str, uri: &str, body: &str) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app(state).oneshot(req).await.unwrap();
    let status = resp.status();
    (status, to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec())
}

#[tokio::test]
async fn route_matches_offline_decision_per_metric() {
    let (state, loaded) = two_metric_state();
    let scores = [0.9, 0.1];
    let (status, body) = call(state.clone(), "POST", "/route", r#"{"scores":[0.9,0.1]}"#).await;
    assert_eq!(status, StatusCode::OK);
    let resp: RouteResponse = serde_json::from_slice(&body).unwrap();
    let offline = route_scores(&scores, loaded.default_config()).unwrap();
    assert_eq!(
        (resp.arm.as_str(), resp.difficulty, resp.metric.as_str()),
        (offline.arm_name.as_str(), offline.difficulty.value(), "gini")
    );

    let (status, body) = call(state, "POST", "/route", r#"{"scores":[0.9,0.1],"metric":"entropy"}"#).await;
    assert_eq!(status, StatusCode::OK);
    let resp: RouteResponse = serde_json::from_slice(&body).unwrap();
    assert_eq!(resp.metric, "entropy");
}

#[tokio::test]
async fn invalid_requests() {
    let (state, _) = two_metric_state();
    for (body, want) in [
        (r#"{"scores":[]}"#, StatusCode::BAD_REQUEST),
        (r#"{"scores":[1,-2]}"#, StatusCode::BAD_REQUEST),
        (r#"{"scores":"nope"}"#, StatusCode::BAD_REQUEST),
        (r#"{}"#, StatusCode::BAD_REQUEST),
        (r#"{"scores":[1,0.5],"metric":"xyz"}"#, StatusCode::UNPROCESSABLE_ENTITY),
        (r#"{"scores":[1,0.5],"metric":"slope"}"#, StatusCode::UNPROCESSABLE_ENTITY),
    ] {
        assert_eq!(call(state.clone(), "POST", "/route", body).await.0, want, "{body}");
    }
}

#[tokio::test]
async fn health_digest_stable_across_restarts() {
    let (a, _) = two_metric_state();
    let (b, _) = two_metric_state();
    let (sa, ba) = call(a, "GET", "/healthz", "").await;
    let (sb, bb) = call(b, "GET", "/healthz", "").await;
    assert_eq!((sa, sb), (StatusCode::OK, StatusCode::OK));
    assert_eq!(ba, bb);
    let v: serde_json::Value = serde_json::from_slice(&ba).unwrap();
    assert_eq!(v["config_sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["metrics"], serde_json::json!(["entropy", "gini"]));

    assert_eq!(call(AppState::unloaded(), "GET", "/healthz", "").await.0, StatusCode::SERVICE_UNAVAILABLE);
}

#[tokio::test]
async fn request_order_does_not_matter() {
    let (state, _) = two_metric_state();
    let bodies = [r#"{"scores":[0.9,0.1]}"#, r#"{"scores":[0.3,0.3,0.3]}"#, r#"{"scores":[5,1,1,0]}"#];
    let mut forward = Vec::new();
    for b in bodies {
        forward.push(call(state.clone(), "POST", "/route", b).await);
    }
    let mut backward = Vec::new();
    for b in bodies.iter().rev() {
        backward.push(call(state.clone(), "POST", "/route", b).await);
    }
    backward.reverse();
    let strip = |v: &[(StatusCode, Vec<u8>)]| -> Vec<(String, f64)> {
        v.iter()
            .map(|(_, b)| {
                let r: RouteResponse = serde_json::from_slice(b).unwrap();
                (r.arm, r.difficulty)
            })
            .collect()
    };
    assert_eq!(strip(&forward), strip(&backward));
}
