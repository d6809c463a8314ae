use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use paracalc::calculus::{parse_ext, EmbedTarget, SpaceParam};
use paracalc::Scale;

#[derive(Debug, Parser)]
#[command(name = "paracalc", version, about = "Multiplication in anisotropic Besov and Triebel-Lizorkin spaces")]
pub struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exit with status 3 when the answer is Open
    #[arg(long, global = true)]
    pub strict: bool,
    /// Seed for every randomized step
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Anisotropic modulus [x] of a point
    Modulus(ModulusArgs),
    /// Values of the dyadic cutoffs phi_j and psi_j
    Partition(PartitionArgs),
    /// Besov or Triebel-Lizorkin quasi-norm of a grid function
    Norm(NormArgs),
    /// Paraproduct splitting of a product
    Paraprod(ParaprodArgs),
    /// Build a test function and optionally save it
    Witness(WitnessArgs),
    /// Compare a computed witness norm with its closed form
    OracleVerify(OracleArgs),
    /// Is multiplication bounded from A0 (+) A1?
    CheckMult(CheckMultArgs),
    /// Receiving region of A0 (+) A1, or membership of A2 in it
    Receiving(ReceivingArgs),
    /// Embedding of a space into another space or into L_r
    Embed(EmbedArgs),
    /// Embedding between spaces on a bounded domain
    DomainEmbed(DomainEmbedArgs),
    /// Logarithmic growth of phi(0) H_k
    DemoDivergence(DivergenceArgs),
}

/// A period: a number optionally followed by `pi`, as in `512pi` or `6.5`.
fn period(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (num, factor) = match t.strip_suffix("pi") {
        Some("") => ("1", std::f64::consts::PI),
        Some(head) => (head, std::f64::consts::PI),
        None => (t, 1.0),
    };
    num.parse::<f64>().map(|v| v * factor).map_err(|e| format!("bad period {t:?}: {e}"))
}

fn ext(text: &str) -> Result<f64, String> {
    parse_ext(text).map_err(|e| e.to_string())
}

fn space(text: &str) -> Result<SpaceParam, String> {
    text.parse().map_err(|e: paracalc::Error| e.to_string())
}

fn target(text: &str) -> Result<EmbedTarget, String> {
    text.parse().map_err(|e: paracalc::Error| e.to_string())
}

fn scale(text: &str) -> Result<Scale, String> {
    match text {
        "B" | "b" => Ok(Scale::B),
        "F" | "f" => Ok(Scale::F),
        _ => Err(format!("scale must be B or F, got {text:?}")),
    }
}

/// Grid geometry; without `--n` and `--L` a grid suited to the input is chosen.
#[derive(Debug, Args)]
pub struct GridArgs {
    /// Weight vector, e.g. `1,2`
    #[arg(long = "M", value_delimiter = ',')]
    pub m: Option<Vec<f64>>,
    /// Points per axis; a single value applies to every axis
    #[arg(long = "n", value_delimiter = ',', requires = "periods")]
    pub n: Option<Vec<usize>>,
    /// Periods per axis, e.g. `512pi` or `2pi,4pi`
    #[arg(long = "L", value_delimiter = ',', value_parser = period, requires = "n")]
    pub periods: Option<Vec<f64>>,
}

/// Weight information for the symbolic commands.
#[derive(Debug, Args)]
pub struct ContextArgs {
    /// |M|, the sum of the weight vector
    #[arg(long = "Mtot", conflicts_with = "m")]
    pub mtot: Option<f64>,
    /// Treat |M| as coming from a non-isotropic weight
    #[arg(long, conflicts_with = "m")]
    pub anisotropic: bool,
    /// Full weight vector, e.g. `1,2`
    #[arg(long = "M", value_delimiter = ',')]
    pub m: Option<Vec<f64>>,
}

/// A witness given by kind and parameters, or as a JSON object.
#[derive(Debug, Args)]
pub struct WitnessSelect {
    /// Kind (`rho_k`, `theta_family_plus`, ...) or JSON such as `{"kind":"rho_k","k":3}`
    #[arg(long)]
    pub witness: Option<String>,
    #[command(flatten)]
    pub params: WitnessParams,
}

#[derive(Debug, Args)]
pub struct WitnessParams {
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long = "N")]
    pub big_n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NormSelect {
    #[arg(long, value_parser = scale, default_value = "B")]
    pub scale: Scale,
    #[arg(long, allow_hyphen_values = true)]
    pub s: f64,
    #[arg(long, value_parser = ext)]
    pub p: f64,
    #[arg(long, value_parser = ext)]
    pub q: f64,
    /// Highest level; defaults to the finest level the grid resolves
    #[arg(long = "J")]
    pub j: Option<i64>,
}

#[derive(Debug, Args)]
pub struct ModulusArgs {
    /// Point, e.g. `0.3,-2`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Weight vector; isotropic by default
    #[arg(long = "M", value_delimiter = ',')]
    pub m: Option<Vec<f64>>,
    /// Also report the dilation t^M x
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Moduli at which to evaluate, e.g. `0,1.2,5`
    #[arg(long, value_delimiter = ',', required = true)]
    pub r: Vec<f64>,
    /// Highest level
    #[arg(long = "J", default_value_t = 4)]
    pub j: i64,
    /// Cutoff radii `a,b` with 1 <= a < b < 2a
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Grid file (ALPG1)
    #[arg(long, conflicts_with = "witness")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub witness: WitnessSelect,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub norm: NormSelect,
}

#[derive(Debug, Args)]
pub struct ParaprodArgs {
    /// First factor, a grid file
    #[arg(long, requires = "v")]
    pub u: Option<PathBuf>,
    /// Second factor, a grid file
    #[arg(long, requires = "u")]
    pub v: Option<PathBuf>,
    /// First factor as a witness kind or JSON
    #[arg(long, requires = "witness_v", conflicts_with_all = ["u", "random"])]
    pub witness_u: Option<String>,
    /// Second factor as a witness kind or JSON
    #[arg(long, requires = "witness_u")]
    pub witness_v: Option<String>,
    /// Two random band-limited factors drawn from `--seed`
    #[arg(long, conflicts_with = "u")]
    pub random: bool,
    /// Spectral radius of the random factors
    #[arg(long)]
    pub radius: Option<f64>,
    /// Highest level
    #[arg(long = "J")]
    pub j: Option<i64>,
    /// Directory receiving pi1, pi2, pi3 and the truncated product as ALPG1 files
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Kind or JSON
    pub kind: String,
    #[command(flatten)]
    pub params: WitnessParams,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Save the sampled function (ALPG1)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub witness: WitnessSelect,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub norm: NormSelect,
}

#[derive(Debug, Args)]
pub struct CheckMultArgs {
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub a0: SpaceParam,
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub a1: SpaceParam,
    /// Also audit this many sampled receivers against the necessary conditions
    #[arg(long)]
    pub audit: Option<usize>,
    #[command(flatten)]
    pub ctx: ContextArgs,
}

#[derive(Debug, Args)]
pub struct ReceivingArgs {
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub a0: SpaceParam,
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub a1: SpaceParam,
    /// Candidate receiver
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub a2: Option<SpaceParam>,
    #[command(flatten)]
    pub ctx: ContextArgs,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub from: SpaceParam,
    /// `SCALE:s:p:q` or `L:r`
    #[arg(long, value_parser = target, allow_hyphen_values = true)]
    pub to: EmbedTarget,
    #[command(flatten)]
    pub ctx: ContextArgs,
}

#[derive(Debug, Args)]
pub struct DomainEmbedArgs {
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub from: SpaceParam,
    #[arg(long, value_parser = space, allow_hyphen_values = true)]
    pub to: SpaceParam,
    #[command(flatten)]
    pub ctx: ContextArgs,
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    /// Number of pairings
    #[arg(long = "K", default_value_t = 1024)]
    pub k: u64,
    /// Value of the test function at the origin
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub phi0: f64,
}
