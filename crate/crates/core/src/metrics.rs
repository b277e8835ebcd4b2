//! Skewness statistics over a score distribution.
//!
//! Every function here is pure. Entropy is in bits, the cumulative rank is
//! a context count, the area is in units of contexts (rectangle rule with
//! unit spacing) and the power-law exponent is dimensionless.

use thiserror::Error;

use crate::score::ScoreDistribution;
use crate::types::{DifficultyScore, MetricKind, MetricSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("scores sum to zero; the distribution cannot be normalized")]
    DegenerateDistribution,
    #[error("cumulative probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(f64),
    #[error("metric needs at least 2 scores, got {0}")]
    TooFewScores(usize),
    #[error("score at rank {rank} is not strictly positive ({value}); log-log fit undefined")]
    NonPositiveScore { rank: usize, value: f64 },
}

/// Scores divided by their sum, in descending score order.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

fn checked_total(d: &ScoreDistribution) -> Result<f64, MetricError> {
    let total = d.sum();
    if d.is_degenerate() || total <= 0.0 {
        return Err(MetricError::DegenerateDistribution);
    }
    Ok(total)
}

pub fn normalize_probability(d: &ScoreDistribution) -> Result<ProbabilityVector, MetricError> {
    let total = checked_total(d)?;
    Ok(ProbabilityVector(d.scores().iter().map(|s| s / total).collect()))
}

/// Shannon entropy of the normalized scores, in bits. `0 · log 0` counts as 0.
pub fn entropy(d: &ScoreDistribution) -> Result<f64, MetricError> {
    let total = checked_total(d)?;
    let h: f64 = d.scores().iter().map(|s| s / total).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum();
    Ok(h + 0.0)
}

/// Gini coefficient of the scores.
///
/// With the scores in ascending order `s'_1 ≤ … ≤ s'_K` this is
/// `(K + 1 − 2 Σ (K − i + 1) s'_i / Σ s'_j) / K`.
pub fn gini(d: &ScoreDistribution) -> Result<f64, MetricError> {
    let total = checked_total(d)?;
    let k = d.len() as f64;
    // Descending position j (0-based) is ascending position K - j, whose
    // weight K - i + 1 is j + 1.
    let weighted: f64 = d.scores().iter().enumerate().map(|(j, s)| (j + 1) as f64 * s).sum();
    Ok((k + 1.0 - 2.0 * weighted / total) / k)
}

/// Smallest `k` whose top-`k` share of the total score reaches `p`.
///
/// The share is computed as a prefix sum of raw scores over the total, and
/// compared with a plain `>=`.
pub fn cumulative_k(d: &ScoreDistribution, p: f64) -> Result<usize, MetricError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(MetricError::InvalidProbability(p));
    }
    let total = checked_total(d)?;
    let mut prefix = 0.0;
    for (i, s) in d.scores().iter().enumerate() {
        prefix += s;
        if prefix / total >= p {
            return Ok(i + 1);
        }
    }
    // Rounding can leave the full prefix a hair under 1.
    Ok(d.len())
}

/// Area under the min-max normalized score curve.
///
/// A flat vector has no defined normalization; it is assigned the maximum
/// area `K`.
pub fn minmax_area(d: &ScoreDistribution) -> Result<f64, MetricError> {
    if d.len() < 2 {
        return Err(MetricError::TooFewScores(d.len()));
    }
    let (hi, lo) = (d.max(), d.min());
    let range = hi - lo;
    if range == 0.0 {
        return Ok(d.len() as f64);
    }
    Ok(d.scores().iter().map(|s| (s - lo) / range).sum())
}

/// Power-law exponent `α` of `s_i ≈ C / i^α`, from a least-squares line
/// through `(ln i, ln s_i)`. Returns `−slope`.
pub fn powerlaw_slope(d: &ScoreDistribution) -> Result<f64, MetricError> {
    let k = d.len();
    if k < 2 {
        return Err(MetricError::TooFewScores(k));
    }
    if let Some((i, &value)) = d.scores().iter().enumerate().find(|(_, &s)| s <= 0.0) {
        return Err(MetricError::NonPositiveScore { rank: i + 1, value });
    }
    let n = k as f64;
    let xs = (1..=k).map(|i| (i as f64).ln());
    let x_mean = xs.clone().sum::<f64>() / n;
    let y_mean = d.scores().iter().map(|s| s.ln()).sum::<f64>() / n;
    let (sxy, sxx) = xs.zip(d.scores()).fold((0.0, 0.0), |(sxy, sxx), (x, s)| {
        let dx = x - x_mean;
        (sxy + dx * (s.ln() - y_mean), sxx + dx * dx)
    });
    Ok(-(sxy / sxx))
}

/// The metric value, oriented so that larger means harder.
///
/// Entropy, cumulative rank and area grow as the distribution flattens and
/// are used as is. Gini and the power-law exponent shrink as it flattens and
/// are negated.
pub fn difficulty_score(d: &ScoreDistribution, metric: &MetricSpec) -> Result<DifficultyScore, MetricError> {
    let value = match metric.kind {
        MetricKind::Entropy => entropy(d)?,
        MetricKind::CumulativeK => cumulative_k(d, metric.cumulative_probability)? as f64,
        MetricKind::Area => minmax_area(d)?,
        MetricKind::Gini => -gini(d)?,
        MetricKind::PowerLawSlope => -powerlaw_slope(d)?,
    };
    // Negating a zero gives -0.0, which would print as "-0.0".
    Ok(DifficultyScore(value + 0.0))
}
