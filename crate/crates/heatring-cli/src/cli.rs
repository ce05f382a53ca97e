//! Argument grammar. Flag names are a stable interface; scripts depend on
//! them.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use heatring::{DenominatorMode, SolverConfig, Strategy};

#[derive(Parser, Debug)]
#[command(
    name = "heatring",
    version,
    about = "1D ring heat diffusion: solver, throughput benchmarks, and scaling analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one simulation and report the final field
    Solve(SolveArgs),
    /// Time repeated runs at one thread count and emit CSV records
    Bench(BenchArgs),
    /// Bench a whole list of thread counts in one go
    Sweep(SweepArgs),
    /// Read a results CSV and fit the scaling model per strategy
    Analyze(AnalyzeArgs),
    /// Count source lines and estimate effort for a directory
    Metrics(MetricsArgs),
}

/// Flags shared by everything that runs the solver.
#[derive(Args, Debug)]
pub struct ProblemArgs {
    /// Number of grid cells on the ring
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub nodes: usize,

    /// Number of explicit time steps
    #[arg(long, default_value_t = 1_000)]
    pub steps: u64,

    /// Thermal diffusivity
    #[arg(long, default_value_t = 0.25)]
    pub alpha: f64,

    /// Time step size
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,

    /// Grid spacing
    #[arg(long, default_value_t = 1.0)]
    pub dx: f64,

    /// Parallelization strategy: sequential, barrier, or queues
    #[arg(long, default_value = "queues", value_parser = parse_strategy)]
    pub strategy: Strategy,

    /// Divide the stencil by 2*dx instead of dx^2
    #[arg(long)]
    pub paper_denominator: bool,

    /// Run even when the stability guard rejects the parameters
    #[arg(long)]
    pub allow_unstable: bool,

    /// Tag and check every ghost message (no effect on results)
    #[arg(long)]
    pub validate: bool,
}

impl ProblemArgs {
    pub fn to_config(&self, threads: usize) -> SolverConfig {
        SolverConfig {
            nodes: self.nodes,
            steps: self.steps,
            threads,
            alpha: self.alpha,
            dt: self.dt,
            dx: self.dx,
            strategy: self.strategy,
            denominator_mode: if self.paper_denominator {
                DenominatorMode::PaperLiteral
            } else {
                DenominatorMode::Squared
            },
            validate: self.validate,
            allow_unstable: self.allow_unstable,
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Number of worker threads
    #[arg(long, default_value_t = 1, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub threads: usize,

    /// Write the final field to this file, one value per line
    #[arg(long, value_name = "PATH")]
    pub dump_field: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Number of worker threads
    #[arg(long, default_value_t = 1, value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..))]
    pub threads: usize,

    /// Measured runs per thread count
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub repetitions: u32,

    /// Unrecorded runs before measuring each thread count
    #[arg(long, default_value_t = 1)]
    pub warmup: u32,

    /// Write CSV here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Append to --output instead of truncating it
    #[arg(long, requires = "output")]
    pub append: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Comma-separated thread counts to bench, e.g. 1,2,4,8
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        value_name = "T1,T2,...",
        value_parser = clap::builder::RangedU64ValueParser::<usize>::new().range(1..)
    )]
    pub thread_list: Vec<usize>,

    /// Measured runs per thread count
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    pub repetitions: u32,

    /// Unrecorded runs before measuring each thread count
    #[arg(long, default_value_t = 1)]
    pub warmup: u32,

    /// Write CSV here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Append to --output instead of truncating it
    #[arg(long, requires = "output")]
    pub append: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Results CSV produced by bench or sweep
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,

    /// Implementation efforts in person-months for classification,
    /// e.g. queues=2.5,barrier=1.0 (labels must match strategies in the CSV)
    #[arg(long, value_delimiter = ',', value_name = "LABEL=PM", value_parser = parse_effort)]
    pub efforts: Vec<(String, f64)>,

    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// File or directory to count
    #[arg(long, default_value = ".", value_name = "PATH")]
    pub path: PathBuf,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse()
}

fn parse_effort(s: &str) -> Result<(String, f64), String> {
    let (label, pm) = s
        .split_once('=')
        .ok_or_else(|| format!("expected LABEL=PM, got `{s}`"))?;
    if label.is_empty() {
        return Err(format!("empty label in `{s}`"));
    }
    let pm: f64 = pm
        .parse()
        .map_err(|e| format!("bad person-months in `{s}`: {e}"))?;
    if !(pm >= 0.0) || !pm.is_finite() {
        return Err(format!("person-months must be a non-negative number, got `{pm}`"));
    }
    Ok((label.to_string(), pm))
}
