//! Command-line arguments. Every subcommand's arguments serialize into the
//! run manifest, so a manifest can be replayed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const WORKERS_ENV: &str = "THERMGRAPH_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "thermgraph",
    version,
    about = "Thermal graph-state verification toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the result to this file. CSV results also get a
    /// `<file>.manifest.json` sidecar; otherwise the manifest goes to stderr.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "parameters", rename_all = "kebab-case")]
pub enum Command {
    /// Closed-form Tr[ρ_T S], fidelity and accuracy bounds for one setting.
    Expectation(ExpectationArgs),
    /// Simulated protocol trials as CSV.
    Verify(VerifyArgs),
    /// Fidelity, estimator limit and union bound against temperature, as CSV.
    Curves(CurvesArgs),
    /// Deviation of every setting weight from the fidelity, as CSV.
    SweepWt(SweepWtArgs),
    /// Exact check of the binomial identities.
    Identities(IdentitiesArgs),
    /// Closed forms against dense density matrices.
    OracleCheck(OracleCheckArgs),
    /// IQP certification decision from an estimate, a report or a simulation.
    CertifyIqp(CertifyIqpArgs),
    /// Temperature from an observed estimate.
    EstimateTemperature(EstimateTemperatureArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Expectation(_) => "expectation",
            Command::Verify(_) => "verify",
            Command::Curves(_) => "curves",
            Command::SweepWt(_) => "sweep-wt",
            Command::Identities(_) => "identities",
            Command::OracleCheck(_) => "oracle-check",
            Command::CertifyIqp(_) => "certify-iqp",
            Command::EstimateTemperature(_) => "estimate-temperature",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Verify(a) => Some(a.seed),
            Command::CertifyIqp(a) if a.simulate => Some(a.seed),
            _ => None,
        }
    }
}

/// Exactly one of `--beta`, `--temperature`, `--boltzmann-ratio`.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[group(multiple = false)]
pub struct TemperatureArgs {
    /// Inverse temperature (k_B = 1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Temperature k_B T; 0 is the exact zero-temperature limit.
    #[arg(long)]
    pub temperature: Option<f64>,
    /// e^{-2β}.
    #[arg(long)]
    pub boltzmann_ratio: Option<f64>,
}

/// Graph or hypergraph to work on: a JSON file or a named family.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[group(multiple = false)]
pub struct GraphArgs {
    /// JSON file `{"n": .., "e2": [[i, j], ..], "e3": [[i, j, k], ..]}`, 1-indexed.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Ring graph on this many vertices.
    #[arg(long)]
    pub ring: Option<usize>,
    /// Path graph on this many vertices.
    #[arg(long)]
    pub path: Option<usize>,
    /// Edgeless graph on this many vertices.
    #[arg(long)]
    pub qubits: Option<usize>,
}

/// Setting selection; defaults to `1^k 0^k`.
#[derive(Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[group(multiple = false)]
pub struct SettingArgs {
    /// Selector string such as `1100`, site 1 first.
    #[arg(long)]
    pub setting: Option<String>,
    /// Use `1^wt 0^(n-wt)`.
    #[arg(long)]
    pub wt: Option<usize>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub selection: SettingArgs,
    #[command(flatten)]
    pub temperature: TemperatureArgs,
    /// Accuracy added to the reported bounds.
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub selection: SettingArgs,
    #[command(flatten)]
    pub temperature: TemperatureArgs,
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Samples per trial; defaults to the Hoeffding count for (ε, δ).
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent trials, seeded `seed, seed + 1, ...`.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvesArgs {
    /// Qubit counts, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [50usize, 100])]
    pub n: Vec<usize>,
    /// Largest temperature on the grid.
    #[arg(long, default_value_t = 2.0)]
    pub t_max: f64,
    /// Grid points `T_i = t_max * i / points`, i = 1..=points.
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[group(id = "sweep_grid", multiple = false)]
pub struct SweepGrid {
    /// Inverse temperatures, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    /// Values of e^{-2β}, comma separated. Default: 0.001.
    #[arg(long, value_delimiter = ',')]
    pub ratios: Option<Vec<f64>>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepWtArgs {
    #[arg(long = "n", default_value_t = 12)]
    pub n: usize,
    #[command(flatten)]
    pub grid: SweepGrid,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitiesArgs {
    #[arg(long, default_value_t = 40)]
    pub kmax: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheckArgs {
    /// Largest ring size checked (2..=nmax).
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Check this hypergraph instead of rings.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.5, 1.0, 2.0])]
    pub betas: Vec<f64>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyIqpArgs {
    /// Estimated fidelity to certify.
    #[arg(long, conflicts_with_all = ["report", "simulate"])]
    pub f_est: Option<f64>,
    /// VerificationReport JSON whose estimate and size are certified.
    #[arg(long, conflicts_with = "simulate")]
    pub report: Option<PathBuf>,
    /// Simulate the protocol on the two-row family first.
    #[arg(long)]
    pub simulate: bool,
    /// Qubit count (with --f-est or --simulate).
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Extra CZ edges for the simulated family, e.g. `1-2,3-8`.
    #[arg(long, value_delimiter = ',')]
    pub e2: Vec<String>,
    #[command(flatten)]
    pub temperature: TemperatureArgs,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub delta: f64,
    /// Samples for the simulation; defaults to the Hoeffding count.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = WORKERS_ENV, default_value_t = 1)]
    pub workers: usize,
    /// Also draw this many X-basis samples (n <= 20) and report their
    /// distance to the ideal distribution.
    #[arg(long)]
    pub iqp_shots: Option<u64>,
    /// Permit n below the certification minimum.
    #[arg(long)]
    pub allow_small_n: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Match the half-weight estimator limit.
    #[default]
    Estimator,
    /// Match the fidelity.
    Fidelity,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateTemperatureArgs {
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long)]
    pub f_est: f64,
    #[arg(long, value_enum, default_value_t = Target::Estimator)]
    pub target: Target,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest JSON, or a JSON result document that embeds one.
    pub manifest: PathBuf,
}
