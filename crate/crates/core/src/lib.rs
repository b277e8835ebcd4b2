//! Training-free routing for retrieval-augmented generation.
//!
//! A query's retrieval score vector is summarized by a skewness statistic
//! (entropy, Gini coefficient, cumulative-mass rank, min-max area, or a
//! power-law slope). Heavily skewed vectors mean the retriever found a few
//! decisive contexts and the query can go to a cheap arm; flat vectors
//! mean the opposite. [`router`] turns the statistic into an arm choice and
//! calibrates thresholds against a budget, [`eval`] replays routing over a
//! labelled corpus, and [`io`] reads and writes the on-disk formats.

pub mod eval;
pub mod io;
pub mod metrics;
pub mod router;
pub mod score;
pub mod types;

pub use eval::{BudgetCurve, CorrelationReport, EvalError};
pub use metrics::MetricError;
pub use router::{CalibrationError, CalibrationReport, Decision, RouteError};
pub use score::{NegativeScores, ScoreDistribution, ScoreError};
pub use types::{Arm, ConfigError, DifficultyScore, MetricKind, MetricSpec, QueryRecord, RouterConfig};
