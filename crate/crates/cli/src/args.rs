use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "SPINLAB_SEED";

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "spinlab",
    version,
    about = "Uncertainty relations for three angular-momentum components"
)]
pub struct Cli {
    /// Seed for stochastic commands.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for parallel commands (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Output file; `-` or `json` writes to stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub emit: Option<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Spin matrices and identity residuals.
    Ops(OpsArgs),
    /// Evaluate relations on one state.
    Verify(VerifyArgs),
    /// Analytic family sweep as CSV.
    Sweep(SweepArgs),
    /// Monte Carlo family sweep as CSV.
    Simulate(SimulateArgs),
    /// Minimum-gap search.
    Probe(ProbeArgs),
    /// Triangle analog scan.
    Triangle(TriangleArgs),
    /// Random-state soak of every applicable relation.
    Soak(SoakArgs),
    /// Re-run a command from its manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ops(_) => "ops",
            Command::Verify(_) => "verify",
            Command::Sweep(_) => "sweep",
            Command::Simulate(_) => "simulate",
            Command::Probe(_) => "probe",
            Command::Triangle(_) => "triangle",
            Command::Soak(_) => "soak",
            Command::Replay(_) => "replay",
        }
    }

    pub fn stochastic(&self) -> bool {
        match self {
            Command::Simulate(a) => !a.analytic,
            Command::Probe(_) | Command::Triangle(_) | Command::Soak(_) => true,
            _ => false,
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct OpsArgs {
    /// Twice the spin quantum number.
    #[arg(long, value_name = "TWICE_S")]
    pub spin: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Family {
    R1,
    R2,
}

#[derive(Debug, Args, Serialize)]
pub struct StateArgs {
    /// Qubit Bloch vector `rx,ry,rz`.
    #[arg(long, value_name = "RX,RY,RZ", allow_hyphen_values = true, conflicts_with_all = ["family", "state_file"])]
    pub bloch: Option<String>,

    #[arg(long, value_enum, conflicts_with = "state_file")]
    pub family: Option<Family>,

    /// Latitude angle for `r1`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,

    /// Meridian angle for `r2`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Family parameter for either family.
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<f64>,

    /// Angles are in degrees.
    #[arg(long)]
    pub degrees: bool,

    /// JSON density matrix: `{"dim": d, "entries": [[re, im], ...]}`.
    #[arg(long, value_name = "PATH")]
    pub state_file: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Relation id, unambiguous prefix, or `all`.
    #[arg(long, default_value = "all")]
    pub relation: String,

    /// Twice the spin; inferred from the state when omitted.
    #[arg(long, value_name = "TWICE_S")]
    pub spin: Option<u32>,

    /// Operator pair for the generic Robertson relation, e.g. `x,y`.
    #[arg(long, value_name = "A,B")]
    pub pair: Option<String>,

    /// Saturation tolerance; gaps below minus this are violations.
    /// Loose enough for Bloch components typed to five digits.
    #[arg(long, default_value_t = 1e-6)]
    pub tolerance: f64,

    #[command(flatten)]
    pub state: StateArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: Family,

    #[arg(long, default_value_t = 360)]
    pub points: usize,

    /// Accepted for symmetry with `simulate`; sweeps are always analytic.
    #[arg(long)]
    pub analytic: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub family: Family,

    #[arg(long, default_value_t = 36)]
    pub points: usize,

    #[arg(long, default_value_t = spin_uncertainty::measure_sim::DEFAULT_SHOTS)]
    pub shots: u64,

    /// Draw every shot individually instead of one binomial count.
    #[arg(long)]
    pub per_draw: bool,

    /// Exact values with zero errors.
    #[arg(long)]
    pub analytic: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long, required_unless_present_any = ["conjecture", "variance_sum"])]
    pub relation: Option<String>,

    #[arg(long, value_name = "TWICE_S", default_value_t = 1)]
    pub spin: u32,

    /// Search the closed Bloch ball instead of pure states.
    #[arg(long)]
    pub mixed: bool,

    /// Scan the higher-spin triple-product conjecture.
    #[arg(long, conflicts_with_all = ["relation", "variance_sum", "mixed"])]
    pub conjecture: bool,

    /// Minimize the variance sum.
    #[arg(long, conflicts_with_all = ["relation", "mixed"])]
    pub variance_sum: bool,

    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 64)]
    pub restarts: usize,

    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,

    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct TriangleArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct SoakArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, value_name = "TWICE_S", default_value_t = 1)]
    pub spin: u32,

    #[arg(long, default_value_t = spin_uncertainty::soak::SOAK_TOLERANCE)]
    pub tolerance: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ReplayArgs {
    #[arg(long, value_name = "PATH")]
    pub manifest: PathBuf,
}
