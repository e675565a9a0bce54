use std::path::PathBuf;

use bandforge_core::DEFAULT_DEPTH;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Density of states, band structure, polynomial zeros and bound states of
/// semi-infinite tridiagonal Hamiltonians with periodic asymptotics.
#[derive(Debug, Parser)]
#[command(name = "bandforge", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Band edges, bands and gaps from the asymptotic coefficients.
    Bands(BandsArgs),
    /// Density of states on an energy grid.
    Density(DensityArgs),
    /// Zeros of the orthogonal polynomials, labelled by band or gap.
    Zeros(ZerosArgs),
    /// Bound states from gap zeros that are stable in the polynomial order.
    Boundstates(BoundStatesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    /// single-band (eq14), two-band (eq17), three-band (eq19) or
    /// unbounded-two-band (eq21).
    #[arg(
        long,
        required_unless_present = "model_file",
        conflicts_with = "model_file"
    )]
    pub model: Option<String>,
    /// First model parameter (default: 0.7 single-band, 0.7 two-band, 1.0 unbounded).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Second model parameter (default: 0.5 single-band, 0.8 two-band, 0.2 unbounded).
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Third model parameter (default: -0.7 single-band, 0.3 two-band, 0.8 unbounded).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// JSON model description (custom head + periodic tail, or a builtin).
    #[arg(long, value_name = "PATH")]
    pub model_file: Option<PathBuf>,
    /// Truncation depth of the continued fraction.
    #[arg(long, env = "BANDFORGE_DEPTH", default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Write output here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Lower end of the grid (default: just below the spectrum).
    #[arg(long, allow_hyphen_values = true)]
    pub emin: Option<f64>,
    /// Upper end of the grid (default: just above the spectrum).
    #[arg(long, allow_hyphen_values = true)]
    pub emax: Option<f64>,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Second-kind seed `s,t` for P̂_1 = (s E + t)/b_0; either part may be
    /// written as a multiple of a_0, e.g. `-0.5,3a0`.
    #[arg(long, value_name = "S,T", allow_hyphen_values = true)]
    pub second_kind: Option<String>,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub common: Common,
    /// Polynomial orders.
    #[arg(long, value_delimiter = ',', default_value = "10,20,30")]
    pub orders: Vec<usize>,
    /// Zeros this close to a band edge count as in the band.
    #[arg(long, default_value_t = 1e-8)]
    pub edge_tol: f64,
}

#[derive(Debug, Args)]
pub struct BoundStatesArgs {
    #[command(flatten)]
    pub common: Common,
    /// Lowest polynomial order examined.
    #[arg(long, default_value_t = 300)]
    pub base_order: usize,
    /// Orders examined per residue class.
    #[arg(long, default_value_t = 4)]
    pub steps: usize,
    /// Largest spread of a stable zero across orders.
    #[arg(long, default_value_t = 1e-6)]
    pub tol_stab: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub edge_tol: f64,
    /// Tolerance on the sum rule reported alongside the states.
    #[arg(long, default_value_t = 1e-3)]
    pub quad_tol: f64,
}
