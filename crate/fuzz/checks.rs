//! Fuzz target bodies. Shared by the libFuzzer binaries and by the seed
//! replay test in the service crate, so both exercise the same assertions.

#![allow(dead_code)]

use std::sync::OnceLock;

use skewroute::io::{self, load_records, parse_arms, parse_calibration, parse_float_list, write_record};
use skewroute::router::route_scores;
use skewroute::{Arm, MetricKind, MetricSpec, NegativeScores, RouterConfig};
use skewroute_service::{handle_route_body, LoadedConfigs, RouteOutcome, RouteRequest};

const POLICIES: [NegativeScores; 2] = [NegativeScores::Reject, NegativeScores::ShiftToZero];

pub fn parse_record_line(data: &[u8]) {
    let Ok(line) = std::str::from_utf8(data) else { return };
    for policy in POLICIES {
        let Ok(rec) = io::parse_record_line(line, policy) else { continue };
        let scores = rec.distribution.scores();
        assert!(!scores.is_empty());
        assert!(scores.windows(2).all(|w| w[0] >= w[1]), "scores not descending");
        assert!(scores.iter().all(|s| s.is_finite() && *s >= 0.0));
        let mut out = Vec::new();
        write_record(&mut out, &rec).unwrap();
        let text = std::str::from_utf8(&out).unwrap();
        let again = io::parse_record_line(text.trim_end(), NegativeScores::Reject).expect("written record reloads");
        assert_eq!(again, rec);
    }
}

pub fn load_corpus(data: &[u8]) {
    for policy in POLICIES {
        if let Err(e) = load_records(data, policy) {
            // Every data error carries a line; only I/O errors (bad UTF-8) may not.
            if e.line().is_none() {
                assert!(matches!(e, io::CorpusError::Io(_)));
            }
        }
    }
}

pub fn calibration_file(data: &[u8]) {
    let Ok(file) = parse_calibration(data) else { return };
    let text = file.to_json_pretty().unwrap();
    let again = parse_calibration(text.as_bytes()).expect("serialized file reparses");
    assert_eq!(again.config.arms, file.config.arms);
    assert_eq!(again.config.thresholds.len(), file.config.thresholds.len());
}

fn configs() -> &'static LoadedConfigs {
    static CONFIGS: OnceLock<LoadedConfigs> = OnceLock::new();
    CONFIGS.get_or_init(|| {
        let cfg = RouterConfig::new(MetricSpec::of(MetricKind::Gini), vec![-0.5], Arm::default_pair()).unwrap();
        LoadedConfigs::from_config(cfg)
    })
}

pub fn route_request(data: &[u8]) {
    let configs = configs();
    let RouteOutcome::Routed(resp) = handle_route_body(configs, data) else { return };
    let cfg = configs.default_config();
    assert!(cfg.arms.iter().any(|a| a.name == resp.arm));
    // Only a body that decodes can route, and it must agree with the library.
    let req: RouteRequest = serde_json::from_slice(data).unwrap();
    let d = route_scores(&req.scores, cfg).unwrap();
    assert_eq!((d.arm_name, d.difficulty.value()), (resp.arm, resp.difficulty));
}

pub fn flag_lists(data: &[u8]) {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_float_list(s) {
        assert!(!v.is_empty() && v.iter().all(|x| x.is_finite()));
    }
    if let Ok(arms) = parse_arms(s) {
        assert!(!arms.is_empty());
        assert!(arms.iter().enumerate().all(|(i, a)| a.rank == i));
    }
}
