//! `qaoa-land`: generate instances, scan QAOA landscapes, aggregate scans.

mod commands;
mod manifest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qaoa-land", version, about = "QAOA parameter-landscape experiments")]
struct Cli {
    /// Worker threads for grid evaluation (default: all cores). Results do
    /// not depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write seeded problem instances as JSON files.
    Gen(GenArgs),
    /// Run an iterative-depth landscape scan on one instance.
    Scan(ScanArgs),
    /// Combine scans of several instances into mean/std surfaces.
    Aggregate(AggregateArgs),
    /// Print the ground and maximum energies of an instance.
    Spectrum(SpectrumArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Maxcut,
    Vertexcover,
    Max3sat,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Vertices (graph problems) or variables (max3sat).
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Clause-to-variable ratio, required for max3sat.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub degree: usize,
    #[arg(long)]
    pub out_dir: std::path::PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Sequential,
    Ramp,
    Optimized,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Sequential,
    #[value(name = "ramp+")]
    RampPlus,
    #[value(name = "ramp-")]
    RampMinus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Endpoint,
    HalfStep,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub instance: std::path::PathBuf,
    #[arg(long, value_enum)]
    pub strategy: StrategyArg,
    /// Signed mixer ramp slope (ramp strategy; magnitude for ramp inits).
    #[arg(long, allow_hyphen_values = true)]
    pub delta_beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta_gamma: Option<f64>,
    #[arg(long, value_enum, default_value = "endpoint")]
    pub ramp_convention: ConventionArg,
    /// Optimiser starting point (default depends on the problem kind).
    #[arg(long, value_enum)]
    pub init: Option<InitArg>,
    #[arg(long, default_value_t = 1)]
    pub p_start: usize,
    #[arg(long, default_value_t = 7)]
    pub p_target: usize,
    #[arg(long, default_value_t = 1)]
    pub p_step: usize,
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_lower: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta_upper: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_lower: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma_upper: Option<f64>,
    /// Constraint penalty for vertexcover / max3sat encodings.
    #[arg(long, default_value_t = 2.0)]
    pub penalty: f64,
    #[arg(long)]
    pub max_evaluations: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub initial_step: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,
    #[arg(long, default_value_t = qaoa_landscape::DEFAULT_QUBIT_CAP)]
    pub max_qubits: usize,
    /// Reuse layers streamed by an earlier, interrupted run with the same inputs.
    #[arg(long)]
    pub resume: bool,
    #[arg(long)]
    pub out_dir: std::path::PathBuf,
}

#[derive(Args, Debug)]
pub struct AggregateArgs {
    #[arg(required = true)]
    pub scan_dirs: Vec<std::path::PathBuf>,
    #[arg(long)]
    pub out_dir: std::path::PathBuf,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub instance: std::path::PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub penalty: f64,
    #[arg(long, default_value_t = qaoa_landscape::DEFAULT_QUBIT_CAP)]
    pub max_qubits: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            return commands::report(&commands::CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("global thread pool is configured once");
    }
    let argv: Vec<String> = std::env::args().collect();
    let outcome = match &cli.command {
        Command::Gen(a) => commands::gen(a, &argv),
        Command::Scan(a) => commands::scan(a, &argv),
        Command::Aggregate(a) => commands::aggregate(a, &argv),
        Command::Spectrum(a) => commands::spectrum(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => commands::report(&e),
    }
}
