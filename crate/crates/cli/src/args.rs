use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "adelab", version, about = "Gamma/zeta numerics and algebraic differential independence experiments")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct RunConfig {
    /// Precision in bits (at least 64).
    #[arg(long, global = true, env = "ADE_BITS", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(64..))]
    pub bits: u32,
    /// Significant decimal digits in printed numbers (default: all digits of the requested precision).
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result to this file (atomically) instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a special function or ratio quantity at one point.
    Eval(EvalArgs),
    /// Print the differential polynomial R_n with Gamma^(n)/Gamma = R_n(f, f', ...).
    Expand(ExpandArgs),
    /// Split a polynomial P(u; v0, v1, v2) into homogeneous parts and coefficient tables.
    Decompose(DecomposeArgs),
    /// Run a named self-check suite.
    Verify(VerifyArgs),
    /// Sample the zeta-jet curve on a vertical line.
    Scan(ScanArgs),
    /// Search for a numerical nonvanishing witness of P along the zeta-jet curve.
    Witness(WitnessArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Zeta,
    ZetaJet,
    Gamma,
    LogGamma,
    DigammaJet,
    GammaRatio,
    #[value(name = "F")]
    F,
    #[value(name = "G")]
    G,
    #[value(name = "H")]
    H,
    Epsilon,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub function: Function,
    /// Argument of Gamma-side functions, e.g. `5+3i`, `3/4+40i`, `-2.5`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Argument of zeta-side functions (falls back to --z).
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Derivative order n.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub ell: Option<u32>,
    /// Highest derivative in a jet (digamma-jet, zeta-jet).
    #[arg(long, short = 'k', visible_alias = "m")]
    pub order: Option<usize>,
    /// Use the truncated power series for G.
    #[arg(long)]
    pub series: bool,
    /// Truncation order J of the G series.
    #[arg(long, default_value_t = 8)]
    pub terms: usize,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    pub n: usize,
    /// Also print c_n, the coefficient of f^(n-2) f', next to n(n-1)/2.
    #[arg(long)]
    pub check_cn: bool,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Polynomial in the JSON exchange format.
    pub poly: PathBuf,
    #[arg(long)]
    pub ell: u32,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// stirling, ratio-identity, g-series, log-derivatives, epsilon, cn or bell
    /// (short aliases eq2.5, eq2.7, eq2.13 are accepted).
    pub suite: String,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Abscissa of the vertical line, in (1/2, 1).
    #[arg(long, default_value_t = 0.75)]
    pub x: f64,
    /// Highest zeta derivative sampled.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Heights `start:stop:step`, stop excluded.
    #[arg(long)]
    pub y: String,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub n: u32,
    /// Heights `start:stop[:step]`, stop excluded, step 0.5 by default.
    #[arg(long, default_value = "30:200")]
    pub y: String,
    #[arg(long, default_value_t = 0.75)]
    pub x: f64,
    /// Upper bound on every |b_{q,r}| at a witness height.
    #[arg(long)]
    pub c0: Option<f64>,
    /// Lower bound on the leading |b_{q0,r0}| at a witness height.
    #[arg(long)]
    pub lower: Option<f64>,
    /// Number of witness heights kept.
    #[arg(long)]
    pub count: Option<usize>,
    /// Factor by which the leading part may undershoot its asymptotic bound.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Also write the sampled trajectory as CSV.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
}
