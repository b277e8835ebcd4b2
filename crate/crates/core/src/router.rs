//! Threshold routing and budget calibration.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{difficulty_score, MetricError};
use crate::score::{ScoreDistribution, ScoreError};
use crate::types::{ConfigError, DifficultyScore, MetricKind, RouterConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RouteError {
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("invalid router config: {0}")]
    InvalidConfig(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalibrationError {
    #[error("calibration set is empty")]
    EmptyCalibrationSet,
    #[error("invalid target ratios: {0}")]
    InvalidTargets(String),
    #[error("difficulty at position {0} is NaN")]
    NanDifficulty(usize),
}

/// Outcome of routing one query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub arm_name: String,
    pub arm_rank: usize,
    pub difficulty: DifficultyScore,
    pub metric_kind: MetricKind,
}

/// Rank of the arm a difficulty value falls into: the number of thresholds
/// strictly below it.
pub fn arm_index(value: f64, thresholds: &[f64]) -> usize {
    // thresholds are sorted, so this is a partition point.
    thresholds.partition_point(|&t| t < value)
}

pub fn decide(d: &ScoreDistribution, cfg: &RouterConfig) -> Result<Decision, RouteError> {
    if cfg.arms.len() != cfg.thresholds.len() + 1 {
        return Err(ConfigError::ThresholdCount {
            expected: cfg.arms.len().saturating_sub(1),
            arms: cfg.arms.len(),
            got: cfg.thresholds.len(),
        }
        .into());
    }
    let difficulty = difficulty_score(d, &cfg.metric)?;
    let rank = arm_index(difficulty.value(), &cfg.thresholds);
    Ok(Decision { arm_name: cfg.arms[rank].name.clone(), arm_rank: rank, difficulty, metric_kind: cfg.metric.kind })
}

/// Validates raw scores under the config's negative-score policy, then decides.
pub fn route_scores(raw: &[f64], cfg: &RouterConfig) -> Result<Decision, RouteError> {
    let d = ScoreDistribution::with_policy(raw, cfg.negative_scores)?;
    decide(&d, cfg)
}

/// Thresholds chosen from a calibration corpus and the split they produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub thresholds: Vec<f64>,
    /// Fraction of the calibration set landing in each arm.
    pub achieved_ratios: Vec<f64>,
    pub target_ratios: Vec<f64>,
    /// Calibration values equal to each threshold. Ties all route to the
    /// cheaper side, so a non-zero count can push the cheap side over target.
    pub tied_at_threshold: Vec<usize>,
}

impl CalibrationReport {
    /// True when ties pushed some cheap-side share above its target.
    pub fn exceeds_target_from_ties(&self) -> bool {
        let mut achieved = 0.0;
        let mut target = 0.0;
        self.thresholds.iter().enumerate().any(|(j, _)| {
            achieved += self.achieved_ratios[j];
            target += self.target_ratios[j];
            self.tied_at_threshold[j] > 1 && achieved > target + 1e-12
        })
    }
}

const QUANTILE_SLACK: f64 = 1e-9;

fn validate_targets(target_ratios: &[f64]) -> Result<(), CalibrationError> {
    let invalid = |msg: String| Err(CalibrationError::InvalidTargets(msg));
    if target_ratios.is_empty() {
        return invalid("no target ratios given".into());
    }
    if let Some(r) = target_ratios.iter().find(|r| !(r.is_finite() && **r > 0.0 && **r < 1.0 + QUANTILE_SLACK)) {
        return invalid(format!("every ratio must lie in (0, 1], got {r}"));
    }
    let total: f64 = target_ratios.iter().sum();
    if (total - 1.0).abs() > QUANTILE_SLACK {
        return invalid(format!("ratios must sum to 1, got {total}"));
    }
    Ok(())
}

/// Picks thresholds so the share of `difficulties` landing in each arm
/// approaches `target_ratios` (one ratio per arm, cheapest first, summing to 1).
///
/// Threshold `j` is the lower empirical quantile at the cumulative cheap-side
/// mass `q_j`: the smallest value `v` such that at least `q_j · n` values are
/// `≤ v`.
pub fn calibrate(difficulties: &[f64], target_ratios: &[f64]) -> Result<CalibrationReport, CalibrationError> {
    validate_targets(target_ratios)?;
    if difficulties.is_empty() {
        return Err(CalibrationError::EmptyCalibrationSet);
    }
    if let Some(i) = difficulties.iter().position(|v| v.is_nan()) {
        return Err(CalibrationError::NanDifficulty(i));
    }
    let mut sorted = difficulties.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();

    let mut thresholds = Vec::with_capacity(target_ratios.len() - 1);
    let mut mass = 0.0;
    for ratio in &target_ratios[..target_ratios.len() - 1] {
        mass += ratio;
        let count = ((mass * n as f64) - QUANTILE_SLACK).ceil().clamp(1.0, n as f64) as usize;
        thresholds.push(sorted[count - 1]);
    }

    let mut counts = vec![0usize; target_ratios.len()];
    for &v in difficulties {
        counts[arm_index(v, &thresholds)] += 1;
    }
    let achieved_ratios = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let tied_at_threshold = thresholds.iter().map(|t| difficulties.iter().filter(|&&v| v == *t).count()).collect();

    Ok(CalibrationReport { thresholds, achieved_ratios, target_ratios: target_ratios.to_vec(), tied_at_threshold })
}

/// Two-arm calibration targeting `cheap_mass` of the set on the cheap arm.
pub fn calibrate_cheap_mass(difficulties: &[f64], cheap_mass: f64) -> Result<CalibrationReport, CalibrationError> {
    calibrate(difficulties, &[cheap_mass, 1.0 - cheap_mass])
}
