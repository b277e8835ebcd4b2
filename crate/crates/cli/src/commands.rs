use std::fs;
use std::hint::black_box;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use skewroute::eval::{
    budget_sweep_with, correlation_report, difficulty_scores, random_baseline, CalibrationSource, SweepOptions,
};
use skewroute::io::{
    generate_synthetic, load_records_from_path, parse_arms, parse_calibration, parse_float_list, write_correlation_csv,
    write_curve_csv, write_records, CalibrationFile, DecisionLine, SyntheticSpec,
};
use skewroute::router::{calibrate, decide, route_scores};
use skewroute::{EvalError, MetricKind, MetricSpec, NegativeScores, QueryRecord, RouterConfig};
use skewroute_service::{AppState, LoadedConfigs};

use crate::args::{
    AnalyzeArgs, BenchArgs, CalibrateArgs, CorpusFlags, EvaluateArgs, GenerateArgs, MetricFlags, RouteArgs, ServeArgs,
};
use crate::error::CliError;
use crate::manifest::{ensure_dir, write_file, write_manifest, RunManifest};

pub const DECISIONS_FILE: &str = "decisions.jsonl";
pub const CURVE_FILE: &str = "curve.csv";
pub const CORRELATION_FILE: &str = "correlation.csv";
pub const CALIBRATION_FILE: &str = "calibration.json";
pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const BENCH_FILE: &str = "bench.json";

fn metric_spec(flags: &MetricFlags) -> Result<MetricSpec, CliError> {
    let kind = flags.metric.map(MetricKind::from).unwrap_or(MetricKind::Gini);
    MetricSpec::new(kind, flags.p).map_err(|e| CliError::usage("--P", e))
}

fn policy(flags: &CorpusFlags) -> NegativeScores {
    if flags.shift_negative {
        NegativeScores::ShiftToZero
    } else {
        NegativeScores::Reject
    }
}

fn load(flags: &CorpusFlags, policy: NegativeScores) -> Result<Vec<QueryRecord>, CliError> {
    load_records_from_path(&flags.corpus, policy)
        .map_err(|e| CliError::Data(format!("{}: {e}", flags.corpus.display())))
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Internal(e.to_string())),
        _ => Ok(()),
    }
}

fn to_string<F>(f: F) -> Result<String, CliError>
where
    F: FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))
}

fn unit_split(fraction: f64) -> Result<f64, CliError> {
    if fraction > 0.0 && fraction < 1.0 {
        Ok(fraction)
    } else {
        Err(CliError::usage("--calibration-split", format!("must lie in (0, 1), got {fraction}")))
    }
}

pub fn route(a: &RouteArgs, argv: &[String]) -> Result<(), CliError> {
    let cfg = match (&a.config, &a.thresholds) {
        (Some(path), _) => {
            let bytes = fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            let cfg = parse_calibration(&bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?.config;
            if let Some(m) = a.metric.metric {
                if MetricKind::from(m) != cfg.metric.kind {
                    return Err(CliError::usage(
                        "--metric",
                        format!("'{}' differs from the config's '{}'", MetricKind::from(m), cfg.metric.kind),
                    ));
                }
            }
            if a.corpus.shift_negative {
                cfg.with_negative_scores(NegativeScores::ShiftToZero)
            } else {
                cfg
            }
        }
        (None, Some(t)) => {
            let thresholds = parse_float_list(t).map_err(|e| CliError::usage("--thresholds", e))?;
            let arms = parse_arms(&a.arms).map_err(|e| CliError::usage("--arms", e))?;
            RouterConfig::new(metric_spec(&a.metric)?, thresholds, arms)?.with_negative_scores(policy(&a.corpus))
        }
        (None, None) => return Err(CliError::Usage("route needs --thresholds or --config".into())),
    };

    let records = load(&a.corpus, cfg.negative_scores)?;
    let mut lines = String::new();
    for r in &records {
        let d = decide(&r.distribution, &cfg).map_err(|e| CliError::Data(format!("record '{}': {e}", r.id)))?;
        lines.push_str(&DecisionLine::new(r.id.clone(), &d).to_json_line());
    }

    ensure_dir(&a.out.out)?;
    let path = a.out.out.join(DECISIONS_FILE);
    write_file(&path, lines.as_bytes())?;
    let mut m = RunManifest::new("route", argv);
    m.metric = Some(cfg.metric);
    m.thresholds = cfg.thresholds.clone();
    m.corpus = vec![a.corpus.corpus.clone()];
    m.outputs = vec![path];
    write_manifest(&a.out.out, m)?;
    emit(&lines)
}

pub fn calibrate_cmd(a: &CalibrateArgs, argv: &[String]) -> Result<(), CliError> {
    let metric = metric_spec(&a.metric)?;
    let ratios = parse_float_list(&a.ratios).map_err(|e| CliError::usage("--ratios", e))?;
    let arms = parse_arms(&a.arms).map_err(|e| CliError::usage("--arms", e))?;
    if ratios.len() != arms.len() {
        return Err(CliError::usage("--ratios", format!("{} ratios for {} arms", ratios.len(), arms.len())));
    }
    let split = a.calibration_split.map(unit_split).transpose()?;
    let policy = policy(&a.corpus);
    let records = load(&a.corpus, policy)?;
    let mut values = difficulty_scores(&records, &metric)?;
    if let Some(fraction) = split {
        values.shuffle(&mut ChaCha8Rng::seed_from_u64(a.seed));
        values.truncate((fraction * values.len() as f64).round() as usize);
    }
    let report = calibrate(&values, &ratios)?;
    if report.exceeds_target_from_ties() {
        eprintln!("warning: tied difficulty values push the cheap side past its target ratio");
    }
    let config = RouterConfig::new(metric, report.thresholds.clone(), arms)?.with_negative_scores(policy);
    let text = CalibrationFile { config, report }.to_json_pretty()?;

    ensure_dir(&a.out.out)?;
    let path = a.out.out.join(CALIBRATION_FILE);
    write_file(&path, text.as_bytes())?;
    let mut m = RunManifest::new("calibrate", argv);
    m.metric = Some(metric);
    m.thresholds = parse_calibration(text.as_bytes())?.config.thresholds;
    m.corpus = vec![a.corpus.corpus.clone()];
    m.seed = split.map(|_| a.seed);
    m.outputs = vec![path];
    write_manifest(&a.out.out, m)?;
    emit(&text)
}

pub fn evaluate(a: &EvaluateArgs, argv: &[String]) -> Result<(), CliError> {
    let metric = metric_spec(&a.metric)?;
    let fractions = parse_float_list(&a.fractions).map_err(|e| CliError::usage("--fractions", e))?;
    let arms = parse_arms(&a.arms).map_err(|e| CliError::usage("--arms", e))?;
    let calibration = match a.calibration_split {
        None => CalibrationSource::InCorpus,
        Some(f) => CalibrationSource::HeldOut { fraction: unit_split(f)?, seed: a.seed },
    };
    let opts = SweepOptions { tokens_per_query: a.tokens, calibration };
    let records = load(&a.corpus, policy(&a.corpus))?;
    let sweep = budget_sweep_with(&records, &metric, &fractions, &arms, &opts)?;

    let csv = to_string(|w| write_curve_csv(w, &sweep.curve))?;
    let mut summary = format!(
        "metric={} evaluated={} calibrated_on={} hit_small={:.6} hit_large={:.6}\n",
        metric.kind, sweep.evaluated, sweep.calibrated_on, sweep.hit_small, sweep.hit_large
    );
    for p in sweep.curve.points() {
        let random = random_baseline(sweep.hit_small, sweep.hit_large, p.large_fraction)?;
        summary.push_str(&format!(
            "rho={:.2} hit_at_1={:.6} random={:.6} gain={:+.6}\n",
            p.large_fraction,
            p.hit_at_1,
            random,
            p.hit_at_1 - random
        ));
    }
    match sweep.average_effectiveness() {
        Ok(v) => summary.push_str(&format!("avg_eff={v:+.6}\n")),
        Err(EvalError::MissingSweepPoint(_)) => summary.push_str("avg_eff=n/a\n"),
        Err(e) => return Err(e.into()),
    }

    ensure_dir(&a.out.out)?;
    let path = a.out.out.join(CURVE_FILE);
    write_file(&path, csv.as_bytes())?;
    let mut m = RunManifest::new("evaluate", argv);
    m.metric = Some(metric);
    m.corpus = vec![a.corpus.corpus.clone()];
    m.seed = a.calibration_split.map(|_| a.seed);
    m.outputs = vec![path];
    write_manifest(&a.out.out, m)?;
    emit(&summary)
}

pub fn analyze(a: &AnalyzeArgs, argv: &[String]) -> Result<(), CliError> {
    let metric = metric_spec(&a.metric)?;
    let records = load(&a.corpus, policy(&a.corpus))?;
    let report = correlation_report(&records, &metric, a.groups)?;
    let csv = to_string(|w| write_correlation_csv(w, &report))?;

    ensure_dir(&a.out.out)?;
    let path = a.out.out.join(CORRELATION_FILE);
    write_file(&path, csv.as_bytes())?;
    let mut m = RunManifest::new("analyze", argv);
    m.metric = Some(metric);
    m.corpus = vec![a.corpus.corpus.clone()];
    m.outputs = vec![path];
    write_manifest(&a.out.out, m)?;
    emit(&csv)
}

pub fn generate(a: &GenerateArgs, argv: &[String]) -> Result<(), CliError> {
    let spec = SyntheticSpec {
        n_queries: a.n,
        easy_fraction: a.easy_fraction,
        k: a.k,
        alpha_easy: a.alpha,
        noise: a.noise,
        p_small_easy: a.p_small_easy,
        p_small_hard: a.p_small_hard,
        p_large_easy: a.p_large_easy,
        p_large_hard: a.p_large_hard,
        seed: a.seed,
    };
    let records = generate_synthetic(&spec)?;
    let mut buf = Vec::new();
    write_records(&mut buf, &records).map_err(|e| CliError::Internal(e.to_string()))?;

    ensure_dir(&a.out.out)?;
    let path = a.out.out.join(CORPUS_FILE);
    write_file(&path, &buf)?;
    let mut m = RunManifest::new("generate", argv);
    m.seed = Some(a.seed);
    m.outputs = vec![path.clone()];
    write_manifest(&a.out.out, m)?;
    eprintln!("wrote {} records to {}", records.len(), path.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct BenchReport {
    metric: String,
    k: usize,
    iterations: usize,
    median_ms: f64,
    p90_ms: f64,
    mean_ms: f64,
}

/// Shuffled score vectors of mixed skew: `i^(-alpha) · u` with `alpha` in
/// `[0, 2)` and `u` uniform in `(0.5, 1]`.
fn bench_pool(k: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1024)
        .map(|_| {
            let alpha = rng.random_range(0.0..2.0);
            let mut v: Vec<f64> =
                (1..=k).map(|i| (i as f64).powf(-alpha) * (1.0 - rng.random::<f64>() * 0.5)).collect();
            v.shuffle(&mut rng);
            v
        })
        .collect()
}

pub fn bench(a: &BenchArgs, argv: &[String]) -> Result<(), CliError> {
    let metric = metric_spec(&a.metric)?;
    if a.iterations == 0 {
        return Err(CliError::usage("--iterations", "must be at least 1"));
    }
    if a.k == 0 {
        return Err(CliError::usage("--k", "must be at least 1"));
    }
    let pool = bench_pool(a.k, a.seed);
    let mut values = Vec::with_capacity(pool.len());
    for v in &pool {
        let d = skewroute::ScoreDistribution::new(v).map_err(|e| CliError::Data(e.to_string()))?;
        values.push(
            skewroute::metrics::difficulty_score(&d, &metric).map_err(|e| CliError::Data(e.to_string()))?.value(),
        );
    }
    let report = calibrate(&values, &[0.5, 0.5])?;
    let cfg = RouterConfig::new(metric, report.thresholds, skewroute::Arm::default_pair())?;

    let mut nanos = Vec::with_capacity(a.iterations);
    for i in 0..a.iterations {
        let scores = &pool[i % pool.len()];
        let t = Instant::now();
        let d = route_scores(black_box(scores), &cfg);
        let elapsed = t.elapsed();
        black_box(d).map_err(|e| CliError::Data(e.to_string()))?;
        nanos.push(elapsed.as_nanos() as u64);
    }
    let mean_ms = nanos.iter().map(|&n| n as f64).sum::<f64>() / nanos.len() as f64 / 1e6;
    nanos.sort_unstable();
    let at = |q: f64| nanos[((nanos.len() - 1) as f64 * q).round() as usize] as f64 / 1e6;
    let out = BenchReport {
        metric: metric.kind.to_string(),
        k: a.k,
        iterations: a.iterations,
        median_ms: at(0.5),
        p90_ms: at(0.9),
        mean_ms,
    };
    let mut line = serde_json::to_string(&out).map_err(|e| CliError::Internal(e.to_string()))?;
    line.push('\n');

    ensure_dir(&a.out.out)?;
    let path = a.out.out.join(BENCH_FILE);
    write_file(&path, line.as_bytes())?;
    let mut m = RunManifest::new("bench", argv);
    m.metric = Some(metric);
    m.seed = Some(a.seed);
    m.outputs = vec![path];
    write_manifest(&a.out.out, m)?;
    emit(&line)
}

pub fn serve(a: &ServeArgs) -> Result<(), CliError> {
    let state = if a.config.is_empty() {
        eprintln!("warning: no --config given; /route and /healthz answer 503");
        AppState::unloaded()
    } else {
        let files = a.config.iter().map(read_config).collect::<Result<Vec<_>, _>>()?;
        AppState::loaded(LoadedConfigs::from_calibration_files(&files).map_err(|e| CliError::Data(e.to_string()))?)
    };
    let addr: std::net::SocketAddr = a.listen.parse().map_err(|e| CliError::usage("--listen", e))?;
    let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Internal(e.to_string()))?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Internal(format!("cannot listen on {addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| CliError::Internal(e.to_string()))?;
        eprintln!("listening on {local}");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        skewroute_service::serve(listener, state, shutdown).await.map_err(|e| CliError::Internal(e.to_string()))
    })
}

fn read_config(path: &PathBuf) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
