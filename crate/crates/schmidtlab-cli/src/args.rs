//! Command-line surface. Every value-carrying flag is optional at this layer;
//! defaults and config-file values are folded in afterwards so that the
//! precedence is always: explicit flag > config file > built-in default.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "schmidtlab",
    version,
    about = "Schmidt decomposition and Schmidt number of an atom-photon scattering state",
    long_about = "Computes the Schmidt number K of the entangled atom-photon state produced by \
                  photon scattering on a free atom, as a function of the control parameter eta \
                  (Doppler width over natural linewidth). Three closed-form curves (exact, \
                  large-eta asymptote, linear fit) and two numerical routes (SVD of the \
                  discretized amplitude, quadrature of the marginal's purity) are available \
                  and can be cross-checked against each other."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep eta and tabulate the Schmidt-number curves (CSV by default)
    Table(TableArgs),
    /// Decompose the state at one eta: spectrum, entropies, optional modes
    Decompose(DecomposeArgs),
    /// Cross-check every route to K at one or more eta values
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug, Default)]
pub struct TableArgs {
    /// Smallest eta in the sweep [default: 0.1]
    #[arg(long)]
    pub eta_min: Option<f64>,
    /// Largest eta in the sweep [default: 50]
    #[arg(long)]
    pub eta_max: Option<f64>,
    /// Number of eta samples, endpoints included [default: 100]
    #[arg(long)]
    pub steps: Option<usize>,
    /// Sample spacing over [eta-min, eta-max] [default: linear]
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    /// Quadrature points per axis for the numerical columns [default: 512]
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Scale factor on the default k half-width 16*eta + 64 [default: 1]
    #[arg(long)]
    pub k_extent_factor: Option<f64>,
    /// Scale factor on the default q half-width 8*eta + 8 [default: 1]
    #[arg(long)]
    pub q_extent_factor: Option<f64>,
    /// Also compute the numerical columns (SVD + purity; O(grid-n^3) per row)
    #[arg(long)]
    pub numerical: bool,
    /// Relative tolerance for the per-row grid-refinement check [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    /// Write the table here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read key=value defaults from this file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct DecomposeArgs {
    /// Control parameter eta (required, here or in the config file)
    #[arg(long)]
    pub eta: Option<f64>,
    /// Quadrature points per axis [default: 512]
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Scale factor on the default k half-width 16*eta + 64 [default: 1]
    #[arg(long)]
    pub k_extent_factor: Option<f64>,
    /// Scale factor on the default q half-width 8*eta + 8 [default: 1]
    #[arg(long)]
    pub q_extent_factor: Option<f64>,
    /// Number of Schmidt mode pairs to emit (JSON output only) [default: 0]
    #[arg(long)]
    pub modes: Option<usize>,
    /// Comma-separated Tsallis/Renyi orders, all > 1 [default: 1.5,2,3]
    #[arg(long)]
    pub orders: Option<String>,
    /// Relative tolerance for the grid-refinement check [default: 1e-6]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output format [default: json]
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    /// Write the document here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read key=value defaults from this file
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
pub struct VerifyArgs {
    /// Eta value to check; repeat or comma-separate for several
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    /// Quadrature points per axis [default: 512]
    #[arg(long)]
    pub grid_n: Option<usize>,
    /// Scale factor on the default k half-width 16*eta + 64 [default: 1]
    #[arg(long)]
    pub k_extent_factor: Option<f64>,
    /// Scale factor on the default q half-width 8*eta + 8 [default: 1]
    #[arg(long)]
    pub q_extent_factor: Option<f64>,
    /// Relative tolerance every route must meet [default: 1e-3]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Structured output instead of the plain-text report (json only)
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Read key=value defaults from this file
    #[arg(long)]
    pub config: Option<PathBuf>,
}
