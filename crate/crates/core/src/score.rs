//! Validated retrieval score vectors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScoreError {
    #[error("score vector is empty")]
    EmptyScores,
    #[error("score at position {index} is not finite ({value})")]
    NonFiniteScore { index: usize, value: f64 },
    #[error(
        "score at position {index} is negative ({value}); enable the shift-to-zero policy to accept negative scores"
    )]
    NegativeScore { index: usize, value: f64 },
}

/// What to do with scores below zero.
///
/// Shifting changes entropy and Gini values, so it is never applied unless
/// asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NegativeScores {
    #[default]
    Reject,
    /// Subtract the minimum from every score when the minimum is negative.
    ShiftToZero,
}

/// Retrieval scores of one query, sorted non-increasing.
///
/// All scores are finite and non-negative. A vector whose scores are all
/// zero is accepted but flagged [`degenerate`](Self::is_degenerate); metrics
/// that normalize by the score sum reject it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreDistribution {
    scores: Vec<f64>,
    degenerate: bool,
}

impl ScoreDistribution {
    /// Validates with the default policy (negative scores rejected).
    pub fn new(raw: &[f64]) -> Result<Self, ScoreError> {
        Self::with_policy(raw, NegativeScores::Reject)
    }

    pub fn with_policy(raw: &[f64], policy: NegativeScores) -> Result<Self, ScoreError> {
        Self::from_vec(raw.to_vec(), policy)
    }

    pub fn from_vec(mut scores: Vec<f64>, policy: NegativeScores) -> Result<Self, ScoreError> {
        if scores.is_empty() {
            return Err(ScoreError::EmptyScores);
        }
        if let Some((index, &value)) = scores.iter().enumerate().find(|(_, s)| !s.is_finite()) {
            return Err(ScoreError::NonFiniteScore { index, value });
        }
        let (min_index, min) =
            scores
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::INFINITY), |acc, (i, s)| if s < acc.1 { (i, s) } else { acc });
        if min < 0.0 {
            match policy {
                NegativeScores::Reject => {
                    return Err(ScoreError::NegativeScore { index: min_index, value: min });
                }
                NegativeScores::ShiftToZero => scores.iter_mut().for_each(|s| *s -= min),
            }
        }
        // -0.0 would otherwise survive and print oddly.
        scores.iter_mut().for_each(|s| *s += 0.0);
        scores.sort_by(|a, b| b.total_cmp(a));
        let degenerate = scores[0] == 0.0;
        Ok(Self { scores, degenerate })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Number of scores (the K of a top-K retrieval).
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// True when every score is zero.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn max(&self) -> f64 {
        self.scores[0]
    }

    pub fn min(&self) -> f64 {
        self.scores[self.scores.len() - 1]
    }

    pub fn sum(&self) -> f64 {
        self.scores.iter().sum()
    }
}

/// Convenience wrapper matching the validation entry point used by loaders.
pub fn validate_distribution(raw: &[f64]) -> Result<ScoreDistribution, ScoreError> {
    ScoreDistribution::new(raw)
}
