use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "phasekit",
    version,
    about = "Quantum phase operators on truncated Fock spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags accepted by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Fock-space dimension.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Radial quadrature nodes.
    #[arg(long, global = true)]
    pub radial: Option<usize>,
    /// Angular quadrature nodes (even).
    #[arg(long, global = true)]
    pub angular: Option<usize>,
    /// Center of the phase window (θ0 − π, θ0 + π].
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta0: Option<f64>,
    /// Log-series displacement parameter χ.
    #[arg(long, global = true)]
    pub chi: Option<f64>,
    /// Log-series order K.
    #[arg(long, global = true)]
    pub series_order: Option<usize>,
    /// Log-series working dimension.
    #[arg(long, global = true)]
    pub dim_work: Option<usize>,
    /// Return a log-series operator even if its tail is above threshold.
    #[arg(long, global = true)]
    pub allow_unconverged: bool,
    /// Pegg-Barnett space parameter (dimension s+1).
    #[arg(long, global = true)]
    pub pb_s: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest.json` or
    /// `./phasekit.manifest.json`.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Accept coherent-state truncations that lose probability.
    #[arg(long, global = true)]
    pub force: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Q-function phase variance of a number state against π²/3.
    AcidTest {
        #[arg(long)]
        n: usize,
    },
    /// Phase moments of a state.
    Moments {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value = "q")]
        method: MomentArg,
        #[arg(long, default_value_t = super::commands::DEFAULT_KMAX)]
        kmax: u32,
    },
    /// Export a phase operator matrix.
    Operator {
        #[arg(long, value_enum)]
        method: OperatorArg,
    },
    /// Diagonals of E†E and EE† for the exponential phase operator.
    Unitarity {
        #[arg(long, value_enum, default_value = "analytic")]
        construction: ConstructionArg,
    },
    /// Free-oscillator evolution of the phase operator.
    Evolve {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Report consistency checks instead of the evolved matrix.
        #[arg(long)]
        check: bool,
        /// Finite-difference step for the derivative check.
        #[arg(long, default_value_t = 1e-6)]
        step: f64,
    },
    /// Moment reports of one state under several methods.
    Compare {
        #[arg(long)]
        state: String,
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "q,pb,operator"
        )]
        methods: Vec<MomentArg>,
        #[arg(long, default_value_t = super::commands::DEFAULT_KMAX)]
        kmax: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::AcidTest { .. } => "acid-test",
            Command::Moments { .. } => "moments",
            Command::Operator { .. } => "operator",
            Command::Unitarity { .. } => "unitarity",
            Command::Evolve { .. } => "evolve",
            Command::Compare { .. } => "compare",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentArg {
    Q,
    Pb,
    Operator,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorArg {
    TurskiAnalytic,
    TurskiQuadrature,
    LogSeries,
    PeggBarnett,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionArg {
    Analytic,
    Quadrature,
}
