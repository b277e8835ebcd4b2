use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewroute::MetricKind;

#[derive(Debug, Parser)]
#[command(
    name = "skewroute",
    version,
    about = "Route queries between a cheap and a costly LLM by retrieval-score skewness"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit one routing decision per corpus record.
    Route(RouteArgs),
    /// Choose thresholds that split a corpus into target arm ratios.
    Calibrate(CalibrateArgs),
    /// Sweep the large-model budget and report Hit@1 per ratio.
    Evaluate(EvaluateArgs),
    /// Group records by difficulty and summarize answer ranks.
    Analyze(AnalyzeArgs),
    /// Write a synthetic labelled corpus.
    Generate(GenerateArgs),
    /// Measure per-decision routing latency.
    Bench(BenchArgs),
    /// Serve routing decisions over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Area,
    Cumulative,
    Entropy,
    Gini,
    Slope,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Area => MetricKind::Area,
            MetricArg::Cumulative => MetricKind::CumulativeK,
            MetricArg::Entropy => MetricKind::Entropy,
            MetricArg::Gini => MetricKind::Gini,
            MetricArg::Slope => MetricKind::PowerLawSlope,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct MetricFlags {
    /// Difficulty metric [default: gini]
    #[arg(long, value_enum)]
    pub metric: Option<MetricArg>,
    /// Target cumulative probability for --metric cumulative, in (0, 1).
    #[arg(long = "P", value_name = "FLOAT", default_value_t = skewroute::types::DEFAULT_CUMULATIVE_PROBABILITY)]
    pub p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CorpusFlags {
    /// JSONL corpus.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Shift each score vector so its minimum is 0 instead of rejecting negative scores.
    #[arg(long)]
    pub shift_negative: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OutFlags {
    /// Output directory.
    #[arg(long, default_value = "skewroute-out")]
    pub out: PathBuf,
}

const DEFAULT_ARMS: &str = "small:0.0485,large:0.5724";

#[derive(Debug, Clone, Args)]
pub struct RouteArgs {
    #[command(flatten)]
    pub corpus: CorpusFlags,
    #[command(flatten)]
    pub metric: MetricFlags,
    /// Comma-separated ascending thresholds, one fewer than arms.
    #[arg(long, conflicts_with = "config")]
    pub thresholds: Option<String>,
    /// calibration.json produced by `calibrate`.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Arms as name:cost_per_million_tokens, cheapest first.
    #[arg(long, default_value = DEFAULT_ARMS, conflicts_with = "config")]
    pub arms: String,
    #[command(flatten)]
    pub out: OutFlags,
}

#[derive(Debug, Clone, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub corpus: CorpusFlags,
    #[command(flatten)]
    pub metric: MetricFlags,
    /// Target share of queries per arm, cheapest first, summing to 1.
    #[arg(long, default_value = "0.5,0.5")]
    pub ratios: String,
    #[arg(long, default_value = DEFAULT_ARMS)]
    pub arms: String,
    /// Calibrate on this shuffled fraction of the corpus only.
    #[arg(long, value_name = "FLOAT")]
    pub calibration_split: Option<f64>,
    /// Shuffle seed for --calibration-split.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutFlags,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub corpus: CorpusFlags,
    #[command(flatten)]
    pub metric: MetricFlags,
    /// Large-model fractions to sweep.
    #[arg(long, default_value = "0,0.2,0.4,0.6,0.8,1")]
    pub fractions: String,
    /// Exactly two arms, cheap first.
    #[arg(long, default_value = DEFAULT_ARMS)]
    pub arms: String,
    /// Prompt tokens per query, for cost.
    #[arg(long, default_value_t = skewroute::eval::DEFAULT_TOKENS_PER_QUERY)]
    pub tokens: f64,
    /// Calibrate thresholds on this shuffled fraction and evaluate on the rest.
    #[arg(long, value_name = "FLOAT")]
    pub calibration_split: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutFlags,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub corpus: CorpusFlags,
    #[command(flatten)]
    pub metric: MetricFlags,
    #[arg(long, default_value_t = 3)]
    pub groups: usize,
    #[command(flatten)]
    pub out: OutFlags,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub easy_fraction: f64,
    /// Scores per query.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    pub noise: f64,
    #[arg(long, default_value_t = 0.9)]
    pub p_small_easy: f64,
    #[arg(long, default_value_t = 0.2)]
    pub p_small_hard: f64,
    #[arg(long, default_value_t = 0.92)]
    pub p_large_easy: f64,
    #[arg(long, default_value_t = 0.7)]
    pub p_large_hard: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutFlags,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub metric: MetricFlags,
    /// Scores per query.
    #[arg(long, default_value_t = 100)]
    pub k: usize,
    #[arg(long, default_value_t = 100_000)]
    pub iterations: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutFlags,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    /// calibration.json to load; repeat for more metrics. The first is the default.
    #[arg(long)]
    pub config: Vec<PathBuf>,
    #[arg(long, env = "SKEWROUTE_LISTEN", default_value = "127.0.0.1:8080")]
    pub listen: String,
}
