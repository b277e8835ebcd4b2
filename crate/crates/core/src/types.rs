//! Domain types shared by the router, the evaluation harness and the I/O layer.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::{NegativeScores, ScoreDistribution};

pub const DEFAULT_CUMULATIVE_PROBABILITY: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown metric '{0}' (expected one of area, cumulative, entropy, gini, slope)")]
    UnknownMetric(String),
    #[error("cumulative probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(f64),
    #[error("router needs at least one arm")]
    NoArms,
    #[error("expected {expected} thresholds for {arms} arms, got {got}")]
    ThresholdCount { expected: usize, arms: usize, got: usize },
    #[error("threshold {index} is NaN")]
    NanThreshold { index: usize },
    #[error("thresholds must be non-decreasing (threshold {index} is smaller than its predecessor)")]
    UnorderedThresholds { index: usize },
    #[error("arm ranks must be 0..{expected} in order, found rank {found} at position {index}")]
    ArmRank { index: usize, expected: usize, found: usize },
    #[error("arm costs must be non-decreasing with rank (arm '{0}' is cheaper than the arm before it)")]
    ArmCostOrder(String),
    #[error("arm '{name}' has an invalid cost {cost}")]
    ArmCost { name: String, cost: f64 },
    #[error("arm names must be non-empty and unique ('{0}')")]
    ArmName(String),
}

/// The skewness statistic used to judge difficulty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "area")]
    Area,
    #[serde(rename = "cumulative")]
    CumulativeK,
    #[serde(rename = "entropy")]
    Entropy,
    #[serde(rename = "gini")]
    Gini,
    #[serde(rename = "slope")]
    PowerLawSlope,
}

impl MetricKind {
    pub const ALL: [MetricKind; 5] =
        [MetricKind::Area, MetricKind::CumulativeK, MetricKind::Entropy, MetricKind::Gini, MetricKind::PowerLawSlope];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Area => "area",
            MetricKind::CumulativeK => "cumulative",
            MetricKind::Entropy => "entropy",
            MetricKind::Gini => "gini",
            MetricKind::PowerLawSlope => "slope",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| ConfigError::UnknownMetric(s.to_string()))
    }
}

/// A metric together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMetricSpec")]
pub struct MetricSpec {
    pub kind: MetricKind,
    /// Target cumulative mass; only read by [`MetricKind::CumulativeK`].
    pub cumulative_probability: f64,
}

#[derive(Deserialize)]
struct RawMetricSpec {
    kind: MetricKind,
    #[serde(default = "default_probability")]
    cumulative_probability: f64,
}

fn default_probability() -> f64 {
    DEFAULT_CUMULATIVE_PROBABILITY
}

impl TryFrom<RawMetricSpec> for MetricSpec {
    type Error = ConfigError;

    fn try_from(raw: RawMetricSpec) -> Result<Self, Self::Error> {
        MetricSpec::new(raw.kind, raw.cumulative_probability)
    }
}

impl MetricSpec {
    pub fn new(kind: MetricKind, cumulative_probability: f64) -> Result<Self, ConfigError> {
        if !(cumulative_probability > 0.0 && cumulative_probability < 1.0) {
            return Err(ConfigError::InvalidProbability(cumulative_probability));
        }
        Ok(Self { kind, cumulative_probability })
    }

    pub fn of(kind: MetricKind) -> Self {
        Self { kind, cumulative_probability: DEFAULT_CUMULATIVE_PROBABILITY }
    }

    pub fn cumulative(p: f64) -> Result<Self, ConfigError> {
        Self::new(MetricKind::CumulativeK, p)
    }
}

/// A metric value oriented so that larger always means harder.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DifficultyScore(pub f64);

impl DifficultyScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// One routing destination: a model tier or a context budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arm {
    pub name: String,
    pub cost_per_million_tokens: f64,
    pub rank: usize,
}

impl Arm {
    pub fn new(name: impl Into<String>, cost_per_million_tokens: f64, rank: usize) -> Self {
        Self { name: name.into(), cost_per_million_tokens, rank }
    }

    /// Builds arms from `(name, cost)` pairs listed cheapest first.
    pub fn tiered<S: AsRef<str>>(pairs: &[(S, f64)]) -> Vec<Arm> {
        pairs.iter().enumerate().map(|(rank, (name, cost))| Arm::new(name.as_ref(), *cost, rank)).collect()
    }

    /// Qwen2.5-7B / Qwen2.5-72B list prices in $ per million tokens.
    pub fn default_pair() -> Vec<Arm> {
        Arm::tiered(&[("small", 0.0485), ("large", 0.5724)])
    }
}

pub(crate) fn validate_arms(arms: &[Arm]) -> Result<(), ConfigError> {
    if arms.is_empty() {
        return Err(ConfigError::NoArms);
    }
    for (index, arm) in arms.iter().enumerate() {
        if arm.rank != index {
            return Err(ConfigError::ArmRank { index, expected: arms.len(), found: arm.rank });
        }
        if arm.name.is_empty() || arms[..index].iter().any(|a| a.name == arm.name) {
            return Err(ConfigError::ArmName(arm.name.clone()));
        }
        if !arm.cost_per_million_tokens.is_finite() || arm.cost_per_million_tokens < 0.0 {
            return Err(ConfigError::ArmCost { name: arm.name.clone(), cost: arm.cost_per_million_tokens });
        }
        if index > 0 && arm.cost_per_million_tokens < arms[index - 1].cost_per_million_tokens {
            return Err(ConfigError::ArmCostOrder(arm.name.clone()));
        }
    }
    Ok(())
}

/// One corpus row.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub id: String,
    pub distribution: ScoreDistribution,
    /// Whether each arm answers this query correctly.
    pub correct: BTreeMap<String, bool>,
    /// 1-based rank of the first retrieved context containing the answer.
    pub answer_rank: Option<u32>,
    pub meta: BTreeMap<String, String>,
}

/// Thresholds partitioning difficulty scores into arms, cheapest first.
///
/// A query with difficulty `v` goes to the arm whose rank equals the number
/// of thresholds strictly below `v`, so a value equal to a threshold takes
/// the cheaper side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRouterConfig")]
pub struct RouterConfig {
    pub metric: MetricSpec,
    pub thresholds: Vec<f64>,
    pub arms: Vec<Arm>,
    #[serde(default)]
    pub negative_scores: NegativeScores,
}

#[derive(Deserialize)]
struct RawRouterConfig {
    metric: MetricSpec,
    thresholds: Vec<f64>,
    arms: Vec<Arm>,
    #[serde(default)]
    negative_scores: NegativeScores,
}

impl TryFrom<RawRouterConfig> for RouterConfig {
    type Error = ConfigError;

    fn try_from(raw: RawRouterConfig) -> Result<Self, Self::Error> {
        RouterConfig::new(raw.metric, raw.thresholds, raw.arms).map(|c| c.with_negative_scores(raw.negative_scores))
    }
}

impl RouterConfig {
    pub fn new(metric: MetricSpec, thresholds: Vec<f64>, arms: Vec<Arm>) -> Result<Self, ConfigError> {
        validate_arms(&arms)?;
        if thresholds.len() + 1 != arms.len() {
            return Err(ConfigError::ThresholdCount {
                expected: arms.len() - 1,
                arms: arms.len(),
                got: thresholds.len(),
            });
        }
        if let Some(index) = thresholds.iter().position(|t| t.is_nan()) {
            return Err(ConfigError::NanThreshold { index });
        }
        if let Some(index) = (1..thresholds.len()).find(|&i| thresholds[i] < thresholds[i - 1]) {
            return Err(ConfigError::UnorderedThresholds { index });
        }
        Ok(Self { metric, thresholds, arms, negative_scores: NegativeScores::Reject })
    }

    pub fn with_negative_scores(mut self, policy: NegativeScores) -> Self {
        self.negative_scores = policy;
        self
    }

    pub fn arm(&self, name: &str) -> Option<&Arm> {
        self.arms.iter().find(|a| a.name == name)
    }
}
