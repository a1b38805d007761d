//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twinopt_core::Algorithm;

#[derive(Debug, Parser)]
#[command(
    name = "twinopt",
    version,
    about = "Twin-greedy submodular maximization: instance generation, runs, sweeps and certification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random graph (and optional node groups)
    GenGraph(GenGraphArgs),
    /// Sample RR-sets from a graph under the independent cascade model
    GenRrsets(GenRrsetsArgs),
    /// Run one algorithm on one instance
    Run(RunArgs),
    /// Run algorithms over a parameter axis and tabulate the results
    Sweep(SweepArgs),
    /// Certify runs on random small instances against exhaustive optima
    Certify(CertifyArgs),
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: twinopt_core::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| format!("invalid number {lo:?}"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| format!("invalid number {hi:?}"))?;
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphModel {
    Er,
    Ba,
}

#[derive(Debug, Args)]
pub struct GenGraphArgs {
    #[arg(long, value_enum)]
    pub model: GraphModel,
    #[arg(long)]
    pub n: usize,
    /// Edge probability (er)
    #[arg(long)]
    pub p: Option<f64>,
    /// Seed clique size (ba)
    #[arg(long)]
    pub m0: Option<usize>,
    /// Edges per new node (ba)
    #[arg(long)]
    pub m: Option<usize>,
    /// Uniform edge weights `lo,hi` (default: all weights 1)
    #[arg(long, value_parser = parse_range)]
    pub weights: Option<(f64, f64)>,
    /// Assign nodes uniformly to this many groups
    #[arg(long)]
    pub groups: Option<usize>,
    /// Partition file for --groups (default: OUT.parts)
    #[arg(long)]
    pub parts_out: Option<PathBuf>,
    /// Store every edge as two opposite arcs
    #[arg(long)]
    pub directed: bool,
    #[arg(long, env = "TWINOPT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the manifest to this file
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenRrsetsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub count: usize,
    /// Replace edge weights by 1/in-degree of the head
    #[arg(long)]
    pub indegree_probs: bool,
    #[arg(long, env = "TWINOPT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ObjectiveArgs {
    /// cut | marketing | modular
    #[arg(long)]
    pub objective: String,
    /// Graph file (cut)
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// RR-set file, once per product (marketing)
    #[arg(long)]
    pub rrsets: Vec<PathBuf>,
    /// Node cost file (marketing)
    #[arg(long)]
    pub costs: Option<PathBuf>,
    /// Budget B (marketing; default m times the total cost)
    #[arg(long)]
    pub budget: Option<f64>,
    /// Comma-separated element weights (modular)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub modular_weights: Option<Vec<f64>>,
    /// Constraint spec: uniform:K | partition:PATH:K | seed:K | seed:V,M,K, joined by `+`
    #[arg(long)]
    pub constraint: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_algorithm)]
    pub algo: Algorithm,
    #[command(flatten)]
    pub instance: ObjectiveArgs,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// SampleGreedy keep probability
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    #[arg(long, env = "TWINOPT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// JSON report file (also printed to stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// One-row CSV file
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Leave wall-clock time out of all artifacts
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    /// Per-part / per-node cap of the constraint
    Cap,
    Epsilon,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub instance: ObjectiveArgs,
    #[arg(long, value_enum)]
    pub axis: SweepAxis,
    /// Comma-separated axis values
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<String>,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "twinfast,samplegreedy")]
    pub algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Repetitions of randomized algorithms
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, env = "TWINOPT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// CSV table
    #[arg(long)]
    pub out: PathBuf,
    /// Three-panel SVG chart
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub omit_timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertifyFamily {
    /// Partition matroid, two groups, cap 2
    Matroid,
    /// Intersection of --p random partition matroids
    Psystem,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value = "matroid")]
    pub constraint: CertifyFamily,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm, default_value = "twin,twinfast")]
    pub algos: Vec<Algorithm>,
    #[arg(long, env = "TWINOPT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Full JSON report (a summary is printed to stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}
