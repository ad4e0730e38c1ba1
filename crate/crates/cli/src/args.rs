use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cattaneo",
    version,
    about = "Decay rates, modal spectra and semigroup norms for thermoelastic systems with Cattaneo heat flux",
    args_override_self = true,
    after_help = "Set CATTANEO_THREADS to cap the number of worker threads."
)]
pub struct Cli {
    /// `key = value` file whose entries act as flags; command-line flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Region and predicted decay of one parameter point.
    #[command(args_override_self = true)]
    Classify(ClassifyArgs),
    /// Labels a uniform grid of the parameter cube (CSV).
    #[command(args_override_self = true)]
    AtlasGrid(AtlasArgs),
    /// Modal eigenvalues over a range of mu, against the asymptotic branches.
    #[command(args_override_self = true)]
    Spectrum(SpectrumArgs),
    /// Supremum of modal resolvent norms along the imaginary axis.
    #[command(args_override_self = true)]
    Resolvent(ResolventArgs),
    /// Semigroup norm decay or the energy of a sample solution.
    #[command(args_override_self = true)]
    Semigroup(SemigroupArgs),
    /// Built-in examples.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Checks every row of a branch table at mu = 1e4, 1e6, 1e8.
    #[command(args_override_self = true)]
    VerifyTables(VerifyArgs),
    /// Runs the acceptance checks; exits 1 if any fails.
    #[command(args_override_self = true)]
    Acceptance(AcceptanceArgs),
}

#[derive(Args, Debug, Default)]
pub struct PointArgs {
    /// Start from a preset's point (and mode sequence).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    /// `alpha,beta` or `alpha,beta,gamma`.
    #[arg(long, value_name = "A,B[,G]")]
    pub point: Option<String>,
    /// Exact decimal, `p/q` or scientific notation.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Inertia coefficient; defaults to 1 when gamma is given, else 0.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Tolerance for boundary comparisons.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct AtlasArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = 9)]
    pub resolution: usize,
    /// Fix gamma instead of sweeping it.
    #[arg(long)]
    pub gamma: Option<String>,
    /// Sample the (alpha, beta) square with m = 0.
    #[arg(long)]
    pub noninertial: bool,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Output file; `-` is stdout.
    #[arg(long, default_value = "-")]
    pub csv: PathBuf,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// `lo:hi:log|lin:count`.
    #[arg(long, default_value = "1e2:1e10:log:25")]
    pub mu_range: String,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EnvelopeArg {
    Continuous,
    Discrete,
}

#[derive(Args, Debug)]
pub struct ResolventArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value = "1e1:1e5:log:40")]
    pub lambda_range: String,
    /// `n4:400`, `<c>n<p>:<count>` or `list:v1,v2,...`; defaults to the
    /// preset's sequence, else `n4:400`.
    #[arg(long)]
    pub modes: Option<String>,
    #[arg(long, value_enum, default_value = "continuous")]
    pub envelope: EnvelopeArg,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TraceArg {
    /// `sup_n ||e^{tA_n} A_n^{-1}||`.
    Norm,
    /// Energy and `|q|` of the solution with `v_n(0) = 1/n`.
    Energy,
}

#[derive(Args, Debug)]
pub struct SemigroupArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value = "1:1e3:log:30")]
    pub t_range: String,
    #[arg(long)]
    pub modes: Option<String>,
    #[arg(long, value_enum, default_value = "norm")]
    pub trace: TraceArg,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum PresetAction {
    List {
        #[arg(long)]
        json: bool,
    },
    Show {
        name: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Table 1 (`1`, with inertia) or Table 2 (`0`).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub m: u8,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-root CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct AcceptanceArgs {
    /// Comma-separated criterion numbers; all when omitted.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..=10))]
    pub only: Vec<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}
