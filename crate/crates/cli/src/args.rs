use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use hqis_core::protocol::{Agent, HelperBasis};

use crate::complex::parse_complex;

#[derive(Debug, Parser)]
#[command(
    name = "hqis",
    version,
    about = "Hierarchical quantum information splitting simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the full report as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Allowed deviation from fidelity 1 and from closed-form oracles.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Number of random secrets [default: 128, or 4 for verify].
    #[arg(long, global = true, value_name = "N")]
    pub secrets: Option<usize>,
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Execute the protocol for one receiver with sampled outcomes.
    Run(RunArgs),
    /// Run every exhaustive branch suite and the closed-form oracles.
    Verify,
    /// Print a correction table.
    Table {
        #[arg(value_enum)]
        which: TableKind,
    },
    /// Rank all twelve receiver/helper coalitions by best achievable fidelity.
    Audit,
    /// Monte Carlo statistics of Bell and helper outcomes.
    Sample {
        /// At least 1000.
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub receiver: AgentArg,
    /// Secret `(|0> + λ|1>)/sqrt(1+|λ|²)`, written `RE+IMj`. Without a
    /// secret every shot draws a Haar-random one.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta"])]
    pub lambda: Option<C64>,
    /// Amplitude of |0>; normalized together with `--beta`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "beta")]
    pub alpha: Option<C64>,
    /// Amplitude of |1>.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, requires = "alpha")]
    pub beta: Option<C64>,
    /// Bob's measurement basis when he is a helper.
    #[arg(long = "basis-b", value_enum)]
    pub basis_b: Option<BasisArg>,
    /// Charlie's measurement basis when he is a helper.
    #[arg(long = "basis-c", value_enum)]
    pub basis_c: Option<BasisArg>,
    /// Helper whose outcome never reaches the receiver (repeatable).
    #[arg(long, value_enum)]
    pub drop: Vec<AgentArg>,
    /// Independent runs, each with fresh outcomes.
    #[arg(long, default_value_t = 1)]
    pub shots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AgentArg {
    Bob,
    Charlie,
    Diana,
}

impl From<AgentArg> for Agent {
    fn from(a: AgentArg) -> Agent {
        match a {
            AgentArg::Bob => Agent::Bob,
            AgentArg::Charlie => Agent::Charlie,
            AgentArg::Diana => Agent::Diana,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Z,
    X,
}

impl From<BasisArg> for HelperBasis {
    fn from(b: BasisArg) -> HelperBasis {
        match b {
            BasisArg::Z => HelperBasis::Z,
            BasisArg::X => HelperBasis::X,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Bob,
    DianaZz,
    DianaX,
}
