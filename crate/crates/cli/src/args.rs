use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bbdcqo",
    version,
    about = "Bias-field counterdiabatic HUBO solvers and baselines"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded random instance.
    Generate(GenerateArgs),
    /// Run one solver on one instance and emit a result record.
    Solve(SolveArgs),
    /// Budget-matched comparison of approximate BBB against a baseline.
    Bench(BenchArgs),
    /// Reduce an instance to a QUBO with auxiliary product variables.
    Quadratize(QuadratizeArgs),
    /// Exhaustively check a reduction written by `quadratize`.
    VerifyReduction(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    SparseChain,
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Solver {
    Sa,
    Greedy,
    Bfdcqo,
    Bbb,
    ExactBbb,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    Measured,
    Reversed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Brute,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Sa,
    Bfdcqo,
    Bbb,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InstanceShape {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = TopologyArg::SparseChain)]
    pub topology: TopologyArg,
    /// Pair count for dense instances.
    #[arg(long)]
    pub n2: Option<usize>,
    /// Triple count for dense instances.
    #[arg(long)]
    pub n3: Option<usize>,
    /// Lower end of the uniform coefficient range.
    #[arg(long, allow_negative_numbers = true)]
    pub low: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub high: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub shape: InstanceShape,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct SaArgs {
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 100)]
    pub reads: usize,
    #[arg(long)]
    pub t_initial: Option<f64>,
    #[arg(long)]
    pub t_final: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct QuantumArgs {
    #[arg(long, default_value_t = 3)]
    pub iterations: usize,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// CVaR fraction of lowest-energy shots.
    #[arg(long, default_value_t = 0.1)]
    pub cvar: f64,
    /// Uniform transverse field.
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub hx: f64,
    /// Total evolution time of the schedule.
    #[arg(long = "total-time", default_value_t = 1.0)]
    pub total_time: f64,
    /// Simpson panels for the angle integral.
    #[arg(long, default_value_t = 64)]
    pub panels: usize,
    #[arg(long, value_enum, default_value_t = OrientationArg::Measured)]
    pub orientation: OrientationArg,
    /// Greedy refinement of every round's samples.
    #[arg(long)]
    pub post_process: bool,
    #[arg(long, default_value_t = 15)]
    pub greedy_sweeps: usize,
    #[arg(long, default_value_t = 150)]
    pub greedy_top_k: usize,
    #[arg(long, default_value_t = 24)]
    pub qubit_cap: usize,
}

#[derive(Debug, Args, Clone)]
pub struct TreeArgs {
    /// Tree depth.
    #[arg(long = "K", short = 'K', default_value_t = 3)]
    pub k: usize,
    /// Bias magnitude on branched spins.
    #[arg(long = "W", short = 'W', default_value_t = 1.0)]
    pub w: f64,
    #[arg(long, default_value_t = 3.0)]
    pub rescale_cap: f64,
    /// Root bias from a bitstring, qubit 0 first.
    #[arg(long)]
    pub warm_start: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub warm_start_scale: f64,
    /// Refuse trees needing more BF-DCQO runs than this.
    #[arg(long)]
    pub run_budget: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub solver: Solver,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Record wall-clock time; the record is then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
    /// Also write the BBB tree dump to this file.
    #[arg(long)]
    pub tree_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OracleArg::Brute)]
    pub oracle: OracleArg,
    #[command(flatten)]
    pub sa: SaArgs,
    #[command(flatten)]
    pub quantum: QuantumArgs,
    #[command(flatten)]
    pub tree: TreeArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance files.
    pub instances: Vec<PathBuf>,
    /// Generate this many instances instead, with seeds `instance-seed + i`.
    #[arg(long)]
    pub generate: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub instance_seed: u64,
    #[command(flatten)]
    pub shape: InstanceShape,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Baseline::Sa)]
    pub baseline: Baseline,
    /// Baseline SA sweeps; budget-matched to the BBB ledger when absent.
    #[arg(long)]
    pub sa_sweeps: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub sa_reads: usize,
    /// Run comparisons whose ledgers differ by more than 5%.
    #[arg(long)]
    pub allow_uneven: bool,
    /// Reference energy for a single instance; brute force otherwise.
    #[arg(long, allow_negative_numbers = true)]
    pub reference_energy: Option<f64>,
    /// Write the quality-versus-evaluations curve here as CSV.
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub quantum: QuantumArgs,
    #[command(flatten)]
    pub tree: TreeArgs,
}

#[derive(Debug, Args)]
pub struct QuadratizeArgs {
    pub instance: PathBuf,
    /// Penalty weight; ten times the largest binary coefficient by default.
    #[arg(long)]
    pub penalty: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub qubo: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
