//! Synthetic labelled corpora with a known easy/hard structure.
//!
//! The random source is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`).
//! Draws happen in this order for every query:
//!
//! 1. class: uniform `[0, 1)` below `easy_fraction` means easy;
//! 2. `K` standard normal jitters `z_i`;
//! 3. answer rank: uniform in `1..=min(3, K)` for easy queries, uniform in
//!    `K/2 + 1..=K` for hard ones;
//! 4. small-arm correctness, then large-arm correctness, each a uniform
//!    `[0, 1)` draw below the class probability.
//!
//! Easy scores follow `i^(−alpha_easy) · exp(noise · z_i)`, hard scores
//! `exp(noise · z_i)`; each vector is divided by its maximum.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::score::{NegativeScores, ScoreDistribution};
use crate::types::QueryRecord;

/// Identifier recorded in generated records' meta.
pub const GENERATOR_RNG: &str = "chacha8";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid synthetic spec: {0}")]
pub struct InvalidSpec(pub String);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_queries: usize,
    pub easy_fraction: f64,
    /// Scores per query.
    pub k: usize,
    pub alpha_easy: f64,
    pub noise: f64,
    pub p_small_easy: f64,
    pub p_small_hard: f64,
    pub p_large_easy: f64,
    pub p_large_hard: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            n_queries: 10_000,
            easy_fraction: 0.5,
            k: 100,
            alpha_easy: 1.0,
            noise: 0.1,
            p_small_easy: 0.9,
            p_small_hard: 0.2,
            p_large_easy: 0.92,
            p_large_hard: 0.7,
            seed: 42,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), InvalidSpec> {
        let fail = |m: String| Err(InvalidSpec(m));
        if self.k < 2 {
            return fail(format!("k must be at least 2, got {}", self.k));
        }
        if !(0.0..=1.0).contains(&self.easy_fraction) {
            return fail(format!("easy_fraction must lie in [0, 1], got {}", self.easy_fraction));
        }
        if !(self.alpha_easy.is_finite() && self.alpha_easy > 0.0) {
            return fail(format!("alpha_easy must be positive, got {}", self.alpha_easy));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return fail(format!("noise must be non-negative, got {}", self.noise));
        }
        for (name, p) in [
            ("p_small_easy", self.p_small_easy),
            ("p_small_hard", self.p_small_hard),
            ("p_large_easy", self.p_large_easy),
            ("p_large_hard", self.p_large_hard),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.p_small_easy < self.p_small_hard || self.p_large_easy < self.p_large_hard {
            return fail("easy queries must be at least as likely to be answered as hard ones".into());
        }
        Ok(())
    }
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Vec<QueryRecord>, InvalidSpec> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = spec.k;
    let width = spec.n_queries.saturating_sub(1).to_string().len().max(6);
    let mut records = Vec::with_capacity(spec.n_queries);

    for q in 0..spec.n_queries {
        let easy = rng.random::<f64>() < spec.easy_fraction;
        let mut scores: Vec<f64> = (1..=k)
            .map(|i| {
                let z: f64 = rng.sample(StandardNormal);
                let template = if easy { (i as f64).powf(-spec.alpha_easy) } else { 1.0 };
                template * (spec.noise * z).exp()
            })
            .collect();
        let max = scores.iter().copied().fold(f64::MIN, f64::max);
        scores.iter_mut().for_each(|s| *s /= max);

        let answer_rank = if easy { rng.random_range(1..=k.min(3)) } else { rng.random_range(k / 2 + 1..=k) };
        let (p_small, p_large) =
            if easy { (spec.p_small_easy, spec.p_large_easy) } else { (spec.p_small_hard, spec.p_large_hard) };
        let small = rng.random::<f64>() < p_small;
        let large = rng.random::<f64>() < p_large;

        let distribution = ScoreDistribution::from_vec(scores, NegativeScores::Reject)
            .map_err(|e| InvalidSpec(format!("generated scores failed validation: {e}")))?;
        records.push(QueryRecord {
            id: format!("syn-{q:0width$}"),
            distribution,
            correct: BTreeMap::from([("small".to_string(), small), ("large".to_string(), large)]),
            answer_rank: Some(answer_rank as u32),
            meta: BTreeMap::from([
                ("class".to_string(), if easy { "easy" } else { "hard" }.to_string()),
                ("rng".to_string(), GENERATOR_RNG.to_string()),
            ]),
        });
    }
    Ok(records)
}
