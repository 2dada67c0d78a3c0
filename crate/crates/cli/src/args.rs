use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Parser)]
#[command(name = "rarenet", version, about = "Signal rareness analysis, area optimization and Trojan test generation")]
pub struct Cli {
    /// Worker threads for parallel stages (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-signal probabilities and design rareness metrics.
    Analyze(AnalyzeArgs),
    /// Minimize and factor every output cone, report before/after metrics.
    Optimize(OptimizeArgs),
    /// Insert rare-trigger Trojans and write a bundle directory.
    Inject(InjectArgs),
    /// Generate a detection test set with MERO or TARMAC.
    Gentest(GentestArgs),
    /// Trojan coverage of a test set against a bundle.
    Evaluate(EvaluateArgs),
    /// Compare the metrics of two designs.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// BENCH netlist file.
    #[arg(long)]
    pub netlist: Option<PathBuf>,
    /// Boolean expression such as "AB+!C(A+D)".
    #[arg(long)]
    pub expr: Option<String>,
    /// Generated adder, ARCH:WIDTH with ARCH one of rca, cla, csa, ksa.
    #[arg(long)]
    pub adder: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Itm,
    Exact,
    Sim,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SeedArg {
    Fixed(u64),
    Random,
}

impl std::str::FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "random" {
            return Ok(SeedArg::Random);
        }
        s.parse().map(SeedArg::Fixed).map_err(|_| format!("`{s}` is neither an integer nor `random`"))
    }
}

impl std::fmt::Display for SeedArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedArg::Fixed(s) => write!(f, "{s}"),
            SeedArg::Random => f.write_str("random"),
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MetricArgs {
    /// Rareness threshold for the rho count, in (0, 0.5].
    #[arg(long, default_value_t = 0.2)]
    pub tau: f64,
    /// Count signals with omega < tau (true) or omega <= tau (false).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub strict: bool,
    /// How many of the rarest signals mu_topN averages.
    #[arg(long, default_value_t = 100)]
    pub top_n: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// Probability estimator.
    #[arg(long, value_enum, default_value_t = MethodArg::Itm)]
    pub method: MethodArg,
    /// Random vectors for simulation-based estimation.
    #[arg(long, default_value_t = 10_000)]
    pub vectors: usize,
    /// RNG seed, or `random` to draw one (it is printed for replay).
    #[arg(long, default_value_t = SeedArg::Fixed(DEFAULT_SEED))]
    pub seed: SeedArg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Write the primary result here instead of stdout.
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Decimal places kept (by truncation) in displayed numbers.
    #[arg(long, default_value_t = 4)]
    pub decimals: u32,
    /// Print numbers at full precision.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[command(flatten)]
    pub estimate: EstimateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub metrics: MetricArgs,
    /// Write the optimized netlist (BENCH) here.
    #[arg(long)]
    #[serde(skip)]
    pub bench_out: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InjectArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Nets with omega < tau are trigger candidates.
    #[arg(long, default_value_t = 0.2)]
    pub tau: f64,
    /// Trigger width.
    #[arg(long, default_value_t = 4)]
    pub q: usize,
    /// Number of Trojans to insert.
    #[arg(long, default_value_t = 10)]
    pub trojans: usize,
    #[command(flatten)]
    pub estimate: EstimateArgs,
    /// Bundle directory (created if missing).
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Mero,
    Tarmac,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GentestArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long, default_value_t = 0.2)]
    pub tau: f64,
    /// N-detect quota (MERO).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Random pool size.
    #[arg(long, default_value_t = 10_000)]
    pub vectors: usize,
    #[arg(long, default_value_t = SeedArg::Fixed(DEFAULT_SEED))]
    pub seed: SeedArg,
    /// Write the test set here instead of stdout.
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// json, or text (one bitstring per line).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvaluateArgs {
    /// Test set file (JSON or text).
    #[arg(long)]
    pub tests: PathBuf,
    /// Bundle directory written by `inject`.
    #[arg(long)]
    pub bundle: PathBuf,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CompareArgs {
    /// Design: `bench:PATH`, `expr:EXPR`, `adder:ARCH:WIDTH` or a BENCH path.
    #[arg(long)]
    pub baseline: String,
    #[arg(long)]
    pub variant: String,
    #[command(flatten)]
    pub metrics: MetricArgs,
    #[command(flatten)]
    pub estimate: EstimateArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}
