use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "majsim",
    version,
    about = "Majority and (psi1,psi2)-majority dynamics experiments",
    args_override_self = true
)]
pub struct Cli {
    /// key=value file; each key is a flag name without the leading dashes.
    /// Flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Base seed (overrides MAJ_SEED and the config file).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for independent trials.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Output file (default: stdout).
    #[arg(short, long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated (or loaded) graph as an edge list with a stats header.
    Generate(GenerateArgs),
    /// Run one trajectory and report its outcome.
    Simulate(SimulateArgs),
    /// Minimum winning elite fraction per influence factor.
    Elites(ElitesArgs),
    /// Final black fraction and outcome labels across initial densities.
    Sweep(SweepArgs),
    /// Majority dynamics on sparse ER graphs with c/n edge probability.
    Conjecture(ConjectureArgs),
    /// Run a property suite; exits 1 on any violation.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge-list file (plain or gzip).
    #[arg(long, value_name = "PATH")]
    pub dataset: Option<PathBuf>,

    /// Check the dataset against the published counts of FB, YT, SD or TW.
    #[arg(long, value_name = "NAME", requires = "dataset")]
    pub manifest: Option<String>,

    /// Replace the dataset by a random graph of this family with matched size.
    #[arg(long, value_name = "FAMILY", requires = "dataset")]
    pub matched: Option<String>,

    /// er, rrg, pa, hrg or cycle.
    #[arg(long, conflicts_with = "dataset")]
    pub family: Option<String>,

    #[arg(long)]
    pub n: Option<usize>,

    /// ER edge probability.
    #[arg(long)]
    pub q: Option<f64>,

    /// RRG degree.
    #[arg(long)]
    pub d: Option<usize>,

    /// PA links per new node.
    #[arg(long = "m-out")]
    pub m_out: Option<usize>,

    /// Target average degree (HRG; ER when --q is absent).
    #[arg(long = "avg-deg")]
    pub avg_deg: Option<f64>,

    #[arg(long, default_value_t = 2.5)]
    pub beta: f64,

    #[arg(long, default_value_t = 0.6)]
    pub temperature: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Majority,
    Psi,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Majority)]
    pub model: ModelKind,

    /// Share of white neighbors that turns a black node white.
    #[arg(long, default_value = "0.7")]
    pub psi1: String,

    /// Share of black neighbors that turns a white node black.
    #[arg(long, default_value = "0.8")]
    pub psi2: String,

    /// Uniform stubbornness for the majority model.
    #[arg(long)]
    pub gamma: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Tolerance {
    /// Largest minority fraction labelled ALMOST_MONOCHROMATIC (negative disables).
    #[arg(long = "mono-tol", default_value_t = 0.05, allow_negative_numbers = true)]
    pub mono: f64,

    /// Largest |black fraction - 1/2| labelled ALMOST_BALANCED (negative disables).
    #[arg(long = "balance-tol", default_value_t = 0.05, allow_negative_numbers = true)]
    pub balance: f64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub tol: Tolerance,

    /// Initial black probability.
    #[arg(long = "p-b", default_value_t = 0.5)]
    pub p_b: f64,

    /// Explicit initial coloring as a b/w string.
    #[arg(long, conflicts_with = "p_b")]
    pub coloring: Option<String>,

    #[arg(long = "max-rounds")]
    pub max_rounds: Option<usize>,

    /// Write per-round counts instead of the summary row.
    #[arg(long)]
    pub trajectory: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Wins,
    TakesOver,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Ascending,
    Galloping,
}

#[derive(Debug, Args)]
pub struct ElitesArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Influence factors.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64,128")]
    pub r: Vec<u64>,

    #[arg(long, value_enum, default_value_t = Criterion::Wins)]
    pub criterion: Criterion,

    /// Grid step as a fraction of n (default 0.001, or one node for n <= 1000).
    #[arg(long)]
    pub resolution: Option<f64>,

    /// Add a random regular overlay of degree 2·r·avg-degree first.
    #[arg(long, conflicts_with = "cm2")]
    pub cm1: bool,

    /// Give every node stubbornness 1 - 1/(2r).
    #[arg(long)]
    pub cm2: bool,

    #[arg(long, value_enum, default_value_t = Strategy::Ascending)]
    pub strategy: Strategy,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub tol: Tolerance,

    /// Explicit initial densities (overrides --step).
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<f64>,

    /// Spacing of the default 0..1 grid.
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,

    #[arg(long, default_value_t = 8)]
    pub trials: usize,

    #[arg(long = "max-rounds")]
    pub max_rounds: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,

    #[arg(long, value_delimiter = ',', default_value = "8,12")]
    pub c: Vec<f64>,

    #[arg(long, default_value_t = 8)]
    pub trials: usize,

    #[command(flatten)]
    pub tol: Tolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Period,
    Potential,
    Mixing,
    Cycle,
    Stubbornness,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    #[command(flatten)]
    pub graph: GraphArgs,

    /// Random instances (period, stubbornness) or random colorings per graph
    /// (potential without --exhaustive).
    #[arg(long)]
    pub instances: Option<usize>,

    /// Largest random graph (period, stubbornness).
    #[arg(long = "max-n")]
    pub max_n: Option<usize>,

    /// Every coloring of every graph (potential).
    #[arg(long)]
    pub exhaustive: bool,

    /// Random graphs (potential).
    #[arg(long, default_value_t = 20)]
    pub graphs: usize,

    /// Thresholds (potential).
    #[arg(long, value_delimiter = ',', default_value = "0.51,0.6,0.75,1")]
    pub psi: Vec<String>,

    /// Initial coloring for a single certificate on the given graph (potential).
    #[arg(long)]
    pub coloring: Option<String>,

    /// Random set pairs (mixing).
    #[arg(long, default_value_t = 100)]
    pub samples: usize,

    /// Random colorings (cycle).
    #[arg(long, default_value_t = 8)]
    pub trials: usize,
}
