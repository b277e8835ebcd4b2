//! Offline replay of routing over a labelled corpus.
//!
//! Records carry precomputed per-arm correctness, so Hit@1 under a routing
//! policy is a count of records whose chosen arm was correct. Hit rates here
//! are fractions in `[0, 1]`; multiply by 100 for the percentages usually
//! printed in result tables.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metrics::{difficulty_score, MetricError};
use crate::router::{arm_index, calibrate_cheap_mass, CalibrationError, Decision};
use crate::types::{Arm, MetricSpec, QueryRecord};

/// Interior budget ratios averaged by [`average_effectiveness`].
pub const INTERIOR_FRACTIONS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
/// Full sweep including the all-cheap and all-costly endpoints.
pub const DEFAULT_FRACTIONS: [f64; 6] = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
/// Average prompt size of a top-100 triple context, in tokens.
pub const DEFAULT_TOKENS_PER_QUERY: f64 = 1873.0;

const FRACTION_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("{records} records but {decisions} decisions")]
    LengthMismatch { records: usize, decisions: usize },
    #[error("record '{id}' has no correctness label for arm '{arm}'")]
    MissingLabel { id: String, arm: String },
    #[error("{what} must lie in [0, 1], got {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("budget curve has no point at large fraction {0}")]
    MissingSweepPoint(f64),
    #[error("budget curve fractions must be strictly increasing")]
    UnorderedCurve,
    #[error("arm '{0}' is not configured")]
    MissingArm(String),
    #[error("a budget sweep needs exactly 2 arms, got {0}")]
    ArmCount(usize),
    #[error("tokens per query must be finite and non-negative, got {0}")]
    InvalidTokens(f64),
    #[error("record '{id}': {source}")]
    Metric { id: String, source: MetricError },
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
    #[error("need at least {need} records with an answer rank, have {have}")]
    TooFewRecords { have: usize, need: usize },
    #[error("group count must be at least 2, got {0}")]
    InvalidGroups(usize),
    #[error("calibration split must leave both parts non-empty (fraction {fraction} of {records} records)")]
    InvalidSplit { fraction: f64, records: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub large_fraction: f64,
    pub hit_at_1: f64,
    pub avg_cost: f64,
}

/// Hit@1 and cost at each budget ratio, ratios strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BudgetCurve {
    points: Vec<CurvePoint>,
}

impl BudgetCurve {
    pub fn new(points: Vec<CurvePoint>) -> Result<Self, EvalError> {
        for p in &points {
            in_unit("large fraction", p.large_fraction)?;
            in_unit("hit@1", p.hit_at_1)?;
        }
        if points.windows(2).any(|w| w[1].large_fraction <= w[0].large_fraction) {
            return Err(EvalError::UnorderedCurve);
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn at(&self, large_fraction: f64) -> Option<&CurvePoint> {
        self.points.iter().find(|p| (p.large_fraction - large_fraction).abs() <= FRACTION_MATCH)
    }
}

fn in_unit(what: &'static str, value: f64) -> Result<f64, EvalError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(EvalError::OutOfRange { what, value })
    }
}

fn hit_rate<'a>(records: &[QueryRecord], mut arm_of: impl FnMut(usize) -> &'a str) -> Result<f64, EvalError> {
    if records.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut hits = 0usize;
    for (i, rec) in records.iter().enumerate() {
        let arm = arm_of(i);
        match rec.correct.get(arm) {
            Some(true) => hits += 1,
            Some(false) => {}
            None => return Err(EvalError::MissingLabel { id: rec.id.clone(), arm: arm.to_string() }),
        }
    }
    Ok(hits as f64 / records.len() as f64)
}

/// Fraction of records whose routed arm answered correctly.
pub fn hit_at_1(records: &[QueryRecord], decisions: &[Decision]) -> Result<f64, EvalError> {
    if records.len() != decisions.len() {
        return Err(EvalError::LengthMismatch { records: records.len(), decisions: decisions.len() });
    }
    hit_rate(records, |i| decisions[i].arm_name.as_str())
}

/// Expected Hit@1 of sending a uniformly random `rho` share of queries to
/// the large arm.
pub fn random_baseline(hit_small: f64, hit_large: f64, rho: f64) -> Result<f64, EvalError> {
    let hs = in_unit("small-arm hit@1", hit_small)?;
    let hl = in_unit("large-arm hit@1", hit_large)?;
    let rho = in_unit("rho", rho)?;
    Ok((1.0 - rho) * hs + rho * hl)
}

/// Mean Hit@1 gain over [`random_baseline`] at the interior ratios
/// 20/40/60/80%.
pub fn average_effectiveness(curve: &BudgetCurve, hit_small: f64, hit_large: f64) -> Result<f64, EvalError> {
    average_effectiveness_over(curve, hit_small, hit_large, &INTERIOR_FRACTIONS)
}

pub fn average_effectiveness_over(
    curve: &BudgetCurve,
    hit_small: f64,
    hit_large: f64,
    fractions: &[f64],
) -> Result<f64, EvalError> {
    if fractions.is_empty() {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for &rho in fractions {
        let point = curve.at(rho).ok_or(EvalError::MissingSweepPoint(rho))?;
        total += point.hit_at_1 - random_baseline(hit_small, hit_large, rho)?;
    }
    Ok(total / fractions.len() as f64)
}

fn per_query_cost(arm: &Arm, tokens_per_query: f64) -> f64 {
    tokens_per_query * arm.cost_per_million_tokens / 1e6
}

fn check_tokens(tokens_per_query: f64) -> Result<(), EvalError> {
    if tokens_per_query.is_finite() && tokens_per_query >= 0.0 {
        Ok(())
    } else {
        Err(EvalError::InvalidTokens(tokens_per_query))
    }
}

/// Average inference spend per query in currency units.
pub fn mean_cost(
    records: &[QueryRecord],
    decisions: &[Decision],
    arms: &[Arm],
    tokens_per_query: f64,
) -> Result<f64, EvalError> {
    check_tokens(tokens_per_query)?;
    if records.len() != decisions.len() {
        return Err(EvalError::LengthMismatch { records: records.len(), decisions: decisions.len() });
    }
    if decisions.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut total = 0.0;
    for d in decisions {
        let arm =
            arms.iter().find(|a| a.name == d.arm_name).ok_or_else(|| EvalError::MissingArm(d.arm_name.clone()))?;
        total += per_query_cost(arm, tokens_per_query);
    }
    Ok(total / decisions.len() as f64)
}

/// Difficulty score of every record, in record order.
pub fn difficulty_scores(records: &[QueryRecord], metric: &MetricSpec) -> Result<Vec<f64>, EvalError> {
    records
        .iter()
        .map(|r| {
            difficulty_score(&r.distribution, metric)
                .map(|d| d.value())
                .map_err(|source| EvalError::Metric { id: r.id.clone(), source })
        })
        .collect()
}

/// Where sweep thresholds are calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CalibrationSource {
    /// Calibrate on the evaluated records themselves, which reproduces exact
    /// budget columns.
    #[default]
    InCorpus,
    /// Shuffle with `seed`, calibrate on the first `fraction` of records and
    /// evaluate on the rest.
    HeldOut { fraction: f64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub tokens_per_query: f64,
    pub calibration: CalibrationSource,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { tokens_per_query: DEFAULT_TOKENS_PER_QUERY, calibration: CalibrationSource::InCorpus }
    }
}

/// A budget curve together with the endpoint hit rates of the evaluated set.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub curve: BudgetCurve,
    pub hit_small: f64,
    pub hit_large: f64,
    /// Share of evaluated records actually sent to the large arm at each point.
    pub achieved_large_fractions: Vec<f64>,
    pub evaluated: usize,
    pub calibrated_on: usize,
}

impl Sweep {
    pub fn average_effectiveness(&self) -> Result<f64, EvalError> {
        average_effectiveness(&self.curve, self.hit_small, self.hit_large)
    }
}

/// Two-arm budget sweep with in-corpus calibration.
pub fn budget_sweep(
    records: &[QueryRecord],
    metric: &MetricSpec,
    fractions: &[f64],
    arms: &[Arm],
) -> Result<BudgetCurve, EvalError> {
    budget_sweep_with(records, metric, fractions, arms, &SweepOptions::default()).map(|s| s.curve)
}

/// For each ratio `rho`, calibrates a threshold for cheap-side mass
/// `1 − rho`, routes, and records Hit@1 and mean cost. `rho = 0` and
/// `rho = 1` skip calibration and send everything to one arm.
pub fn budget_sweep_with(
    records: &[QueryRecord],
    metric: &MetricSpec,
    fractions: &[f64],
    arms: &[Arm],
    opts: &SweepOptions,
) -> Result<Sweep, EvalError> {
    let [small, large] = arms else {
        return Err(EvalError::ArmCount(arms.len()));
    };
    check_tokens(opts.tokens_per_query)?;
    for &f in fractions {
        in_unit("large fraction", f)?;
    }
    if records.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }

    let (calib_idx, eval_idx) = split_indices(records.len(), opts.calibration)?;
    let eval: Vec<QueryRecord> = eval_idx.iter().map(|&i| records[i].clone()).collect();

    let hit_small = hit_rate(&eval, |_| small.name.as_str())?;
    let hit_large = hit_rate(&eval, |_| large.name.as_str())?;

    let interior = fractions.iter().any(|&f| f > 0.0 && f < 1.0);
    let (calib_scores, eval_scores) = if interior {
        let all = difficulty_scores(records, metric)?;
        (calib_idx.iter().map(|&i| all[i]).collect::<Vec<_>>(), eval_idx.iter().map(|&i| all[i]).collect::<Vec<_>>())
    } else {
        (Vec::new(), Vec::new())
    };

    let cost_small = per_query_cost(small, opts.tokens_per_query);
    let cost_large = per_query_cost(large, opts.tokens_per_query);
    let n = eval.len() as f64;

    let mut points = Vec::with_capacity(fractions.len());
    let mut achieved = Vec::with_capacity(fractions.len());
    for &rho in fractions {
        let (hit, n_large) = if rho == 0.0 {
            (hit_small, 0)
        } else if rho == 1.0 {
            (hit_large, eval.len())
        } else {
            let report = calibrate_cheap_mass(&calib_scores, 1.0 - rho)?;
            let routes_large: Vec<bool> = eval_scores.iter().map(|&v| arm_index(v, &report.thresholds) == 1).collect();
            let hit = hit_rate(&eval, |i| if routes_large[i] { large.name.as_str() } else { small.name.as_str() })?;
            (hit, routes_large.iter().filter(|&&b| b).count())
        };
        let n_small = eval.len() - n_large;
        let avg_cost = (n_small as f64 * cost_small + n_large as f64 * cost_large) / n;
        points.push(CurvePoint { large_fraction: rho, hit_at_1: hit, avg_cost });
        achieved.push(n_large as f64 / n);
    }

    Ok(Sweep {
        curve: BudgetCurve::new(points)?,
        hit_small,
        hit_large,
        achieved_large_fractions: achieved,
        evaluated: eval.len(),
        calibrated_on: calib_idx.len(),
    })
}

fn split_indices(n: usize, source: CalibrationSource) -> Result<(Vec<usize>, Vec<usize>), EvalError> {
    match source {
        CalibrationSource::InCorpus => Ok(((0..n).collect(), (0..n).collect())),
        CalibrationSource::HeldOut { fraction, seed } => {
            let n_calib = (fraction * n as f64).round() as usize;
            if !(fraction > 0.0 && fraction < 1.0) || n_calib == 0 || n_calib >= n {
                return Err(EvalError::InvalidSplit { fraction, records: n });
            }
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let eval = idx.split_off(n_calib);
            Ok((idx, eval))
        }
    }
}

/// Answer-rank statistics of one difficulty group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub group_index: usize,
    pub count: usize,
    pub answer_rank_mean: f64,
    /// First quartile, median and third quartile.
    pub answer_rank_quartiles: [f64; 3],
    pub difficulty_min: f64,
    pub difficulty_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub metric: MetricSpec,
    pub groups: Vec<GroupStats>,
}

/// Sizes of `n_groups` near-equal consecutive groups over `n` items; the
/// first `n % n_groups` groups take one extra item.
pub fn group_sizes(n: usize, n_groups: usize) -> Vec<usize> {
    let (base, rem) = (n / n_groups, n % n_groups);
    (0..n_groups).map(|g| base + usize::from(g < rem)).collect()
}

/// Quantile of sorted data with linear interpolation between closest ranks.
pub fn quantile_linear(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Splits records with an answer rank into equal-size groups by ascending
/// difficulty and summarizes the answer rank of each group.
pub fn correlation_report(
    records: &[QueryRecord],
    metric: &MetricSpec,
    n_groups: usize,
) -> Result<CorrelationReport, EvalError> {
    if n_groups < 2 {
        return Err(EvalError::InvalidGroups(n_groups));
    }
    let ranked: Vec<&QueryRecord> = records.iter().filter(|r| r.answer_rank.is_some()).collect();
    if ranked.len() < n_groups {
        return Err(EvalError::TooFewRecords { have: ranked.len(), need: n_groups });
    }
    let mut rows = Vec::with_capacity(ranked.len());
    for r in ranked {
        let d = difficulty_score(&r.distribution, metric)
            .map_err(|source| EvalError::Metric { id: r.id.clone(), source })?;
        rows.push((d.value(), f64::from(r.answer_rank.unwrap_or_default())));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut groups = Vec::with_capacity(n_groups);
    let mut start = 0;
    for (group_index, size) in group_sizes(rows.len(), n_groups).into_iter().enumerate() {
        let slice = &rows[start..start + size];
        start += size;
        let mut ranks: Vec<f64> = slice.iter().map(|r| r.1).collect();
        ranks.sort_by(f64::total_cmp);
        groups.push(GroupStats {
            group_index,
            count: size,
            answer_rank_mean: ranks.iter().sum::<f64>() / size as f64,
            answer_rank_quartiles: [0.25, 0.5, 0.75].map(|q| quantile_linear(&ranks, q)),
            difficulty_min: slice[0].0,
            difficulty_max: slice[size - 1].0,
        });
    }
    Ok(CorrelationReport { metric: *metric, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::score::ScoreDistribution;
    use crate::types::MetricKind;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeMap;

    fn rec(id: usize, scores: &[f64], small: bool, large: bool, rank: Option<u32>) -> QueryRecord {
        QueryRecord {
            id: format!("q{id}"),
            distribution: ScoreDistribution::new(scores).unwrap(),
            correct: BTreeMap::from([("small".to_string(), small), ("large".to_string(), large)]),
            answer_rank: rank,
            meta: BTreeMap::new(),
        }
    }

    fn decision(arm: &str) -> Decision {
        Decision {
            arm_name: arm.into(),
            arm_rank: usize::from(arm == "large"),
            difficulty: crate::DifficultyScore(0.0),
            metric_kind: MetricKind::Gini,
        }
    }

    #[test]
    fn hit_examples() {
        let all: Vec<_> = (0..4).map(|i| rec(i, &[1.0], true, true, None)).collect();
        let d = vec![decision("large"); 4];
        assert_eq!(hit_at_1(&all, &d).unwrap(), 1.0);

        let alt: Vec<_> = (0..10).map(|i| rec(i, &[1.0], i % 2 == 0, false, None)).collect();
        assert_eq!(hit_at_1(&alt, &vec![decision("small"); 10]).unwrap(), 0.5);

        assert_eq!(hit_at_1(&[], &[]), Err(EvalError::EmptyCorpus));
        assert!(matches!(hit_at_1(&alt, &[]), Err(EvalError::LengthMismatch { .. })));
        assert!(matches!(hit_at_1(&alt[..1], &[decision("medium")]), Err(EvalError::MissingLabel { .. })));
    }

    #[test]
    fn baseline_examples() {
        assert_abs_diff_eq!(random_baseline(0.7752, 0.8084, 0.40).unwrap(), 0.78848, epsilon = 1e-12);
        assert_abs_diff_eq!(random_baseline(0.4568, 0.5525, 0.80).unwrap(), 0.53336, epsilon = 1e-12);
        assert_eq!(random_baseline(0.6, 0.6, 0.37).unwrap(), 0.6);
        assert_eq!(random_baseline(0.3, 0.9, 0.0).unwrap(), 0.3);
        assert_eq!(random_baseline(0.3, 0.9, 1.0).unwrap(), 0.9);
        assert!(matches!(random_baseline(0.3, 0.9, 1.2), Err(EvalError::OutOfRange { .. })));
        assert!(matches!(random_baseline(77.52, 0.9, 0.5), Err(EvalError::OutOfRange { .. })));
    }

    fn curve_from_deltas(hs: f64, hl: f64, deltas: [f64; 4]) -> BudgetCurve {
        let points = INTERIOR_FRACTIONS
            .iter()
            .zip(deltas)
            .map(|(&rho, d)| CurvePoint {
                large_fraction: rho,
                hit_at_1: random_baseline(hs, hl, rho).unwrap() + d,
                avg_cost: 0.0,
            })
            .collect();
        BudgetCurve::new(points).unwrap()
    }

    #[test]
    fn average_effectiveness_examples() {
        let (hs, hl) = (0.7752, 0.8084);
        let c = curve_from_deltas(hs, hl, [0.0130, 0.0113, 0.0169, 0.0078]);
        assert_abs_diff_eq!(average_effectiveness(&c, hs, hl).unwrap(), 0.01225, epsilon = 1e-12);
        let c = curve_from_deltas(hs, hl, [0.0038, 0.0033, 0.0004, -0.0020]);
        assert_abs_diff_eq!(average_effectiveness(&c, hs, hl).unwrap(), 0.001375, epsilon = 1e-12);
        let c = curve_from_deltas(hs, hl, [0.0; 4]);
        assert_abs_diff_eq!(average_effectiveness(&c, hs, hl).unwrap(), 0.0, epsilon = 1e-15);

        let partial = BudgetCurve::new(vec![CurvePoint { large_fraction: 0.2, hit_at_1: 0.5, avg_cost: 0.0 }]).unwrap();
        assert_eq!(average_effectiveness(&partial, hs, hl), Err(EvalError::MissingSweepPoint(0.4)));
    }

    #[test]
    fn curve_rejects_unordered_points() {
        let p = |f| CurvePoint { large_fraction: f, hit_at_1: 0.5, avg_cost: 0.0 };
        assert_eq!(BudgetCurve::new(vec![p(0.4), p(0.2)]), Err(EvalError::UnorderedCurve));
        assert_eq!(BudgetCurve::new(vec![p(0.4), p(0.4)]), Err(EvalError::UnorderedCurve));
    }

    #[test]
    fn cost_examples() {
        let arms = Arm::default_pair();
        let recs: Vec<_> = (0..3).map(|i| rec(i, &[1.0], true, true, None)).collect();
        let small = vec![decision("small"); 3];
        let large = vec![decision("large"); 3];
        assert_abs_diff_eq!(mean_cost(&recs, &small, &arms, 1873.0).unwrap(), 9.08405e-5, epsilon = 1e-15);
        assert_abs_diff_eq!(mean_cost(&recs, &large, &arms, 1873.0).unwrap(), 1.0721052e-3, epsilon = 1e-15);
        assert_eq!(mean_cost(&recs, &large, &arms, 0.0).unwrap(), 0.0);
        assert_eq!(
            mean_cost(&recs, &vec![decision("medium"); 3], &arms, 1.0),
            Err(EvalError::MissingArm("medium".into()))
        );
    }

    #[test]
    fn sweep_endpoints_and_interior() {
        // Skewed queries: small already right. Flat queries: only large right.
        let mut recs = Vec::new();
        for i in 0..5 {
            recs.push(rec(i, &[1.0, 0.01 * (i + 1) as f64, 0.01, 0.01], true, true, Some(1)));
        }
        for i in 5..10 {
            recs.push(rec(i, &[1.0, 0.9, 0.8, 0.7 + 0.01 * i as f64], false, true, Some(4)));
        }
        let metric = MetricSpec::of(MetricKind::Gini);
        let sweep =
            budget_sweep_with(&recs, &metric, &DEFAULT_FRACTIONS, &Arm::default_pair(), &Default::default()).unwrap();
        let pts = sweep.curve.points();
        assert_eq!(pts[0].hit_at_1, 0.5);
        assert_eq!(pts[5].hit_at_1, 1.0);
        assert_eq!(pts[2].hit_at_1, 0.9);
        assert_eq!(pts[3].hit_at_1, 1.0);
        assert_eq!(sweep.achieved_large_fractions, vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        assert!(sweep.average_effectiveness().unwrap() > 0.0);
        assert!(pts.windows(2).all(|w| w[0].avg_cost < w[1].avg_cost));
    }

    #[test]
    fn sweep_requires_two_arms() {
        let recs = vec![rec(0, &[1.0], true, true, None)];
        let three = Arm::tiered(&[("a", 1.0), ("b", 2.0), ("c", 3.0)]);
        assert_eq!(budget_sweep(&recs, &MetricSpec::of(MetricKind::Gini), &[0.0], &three), Err(EvalError::ArmCount(3)));
    }

    #[test]
    fn held_out_split_is_disjoint() {
        let (c, e) = split_indices(10, CalibrationSource::HeldOut { fraction: 0.3, seed: 7 }).unwrap();
        assert_eq!((c.len(), e.len()), (3, 7));
        let mut all: Vec<_> = c.iter().chain(&e).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert!(split_indices(10, CalibrationSource::HeldOut { fraction: 1.0, seed: 7 }).is_err());
        assert!(split_indices(1, CalibrationSource::HeldOut { fraction: 0.5, seed: 7 }).is_err());
    }

    #[test]
    fn group_size_rule() {
        assert_eq!(group_sizes(9, 3), vec![3, 3, 3]);
        assert_eq!(group_sizes(10, 3), vec![4, 3, 3]);
        assert_eq!(group_sizes(11, 3), vec![4, 4, 3]);
    }

    #[test]
    fn quartiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_linear(&v, 0.25), 1.75);
        assert_eq!(quantile_linear(&v, 0.5), 2.5);
        assert_eq!(quantile_linear(&v, 0.75), 3.25);
        assert_eq!(quantile_linear(&[7.0], 0.5), 7.0);
    }

    #[test]
    fn correlation_groups() {
        // Three spiky queries answered at rank 1, then progressively flatter ones.
        let mut recs = Vec::new();
        for i in 0..3 {
            recs.push(rec(i, &[1.0, 0.001 * (i + 1) as f64, 0.0005], true, true, Some(1)));
        }
        for i in 3..10 {
            recs.push(rec(i, &[1.0, 0.5 + 0.05 * i as f64, 0.4], true, true, Some(10 + i as u32)));
        }
        recs.push(rec(99, &[1.0, 0.5], true, true, None));
        let r = correlation_report(&recs, &MetricSpec::of(MetricKind::Gini), 3).unwrap();
        let sizes: Vec<_> = r.groups.iter().map(|g| g.count).collect();
        assert_eq!(sizes, vec![4, 3, 3]);
        let r = correlation_report(&recs[..9], &MetricSpec::of(MetricKind::Gini), 3).unwrap();
        assert_eq!(r.groups[0].answer_rank_mean, 1.0);
        assert_eq!(r.groups[0].answer_rank_quartiles, [1.0; 3]);
        assert!(r.groups[2].answer_rank_mean > r.groups[1].answer_rank_mean);

        assert_eq!(
            correlation_report(&recs[..2], &MetricSpec::of(MetricKind::Gini), 3),
            Err(EvalError::TooFewRecords { have: 2, need: 3 })
        );
        assert_eq!(correlation_report(&recs, &MetricSpec::of(MetricKind::Gini), 1), Err(EvalError::InvalidGroups(1)));
    }
}
