use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regulab::Mode;

#[derive(Parser, Debug)]
#[command(name = "regulab", version, about = "Weighted regularity toolkit")]
pub struct Cli {
    /// Omit the timestamp from JSON reports (byte-identical reruns).
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    /// Worker threads (0 = all cores).
    #[arg(long, env = "REGULAB_THREADS", global = true, default_value_t = 0)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph or pair file.
    Gen(GenArgs),
    /// Check weighted β- or (D,β)-quasi-randomness of a graph.
    CheckQr(CheckQrArgs),
    /// Check weighted ε-regularity of a pair (A, B) in F relative to G.
    CheckPair(CheckPairArgs),
    /// Decompose 1_F into structured, pseudorandom and error parts.
    Decompose(DecomposeArgs),
    /// Build a weighted ε-regular partition of F relative to G.
    Partition(PartitionArgs),
    /// Check a partition file against the regular-partition definition.
    Verify(VerifyArgs),
    /// Sample pairs of a G(n, p_ij) graph and measure concentration.
    Concentration(ConcentrationArgs),
    /// Run a canned experiment and write its report.
    Demo(DemoArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct SearchArgs {
    /// auto: exhaustive when within the size cap, otherwise search.
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Search,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Auto => Mode::Auto,
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Search => Mode::Search,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Gnpij,
    Star,
    VolumeCounterexample,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterexampleWeights {
    /// μ ≡ 1, ρ ≡ 1.
    Unit,
    /// μ ∝ degree, ρ ≡ n²/vol(V).
    Volume,
    /// ρ = 1/p on each block, μ ≡ 1.
    Reciprocal,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    /// Constant edge probability (gnpij).
    #[arg(long, conflicts_with = "p_range")]
    pub p: Option<f64>,
    /// Uniform edge probabilities in [lo, hi] (gnpij), as lo,hi.
    #[arg(long, value_delimiter = ',')]
    pub p_range: Option<Vec<f64>>,
    /// Probability floor; defaults to 1/n.
    #[arg(long)]
    pub floor: Option<f64>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Edge weights for the volume counterexample.
    #[arg(long, value_enum, default_value_t = CounterexampleWeights::Unit)]
    pub weights: CounterexampleWeights,
    /// Output file (stdout if absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the probability spec (gnpij), for `concentration`.
    #[arg(long)]
    pub spec_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckQrArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub beta: f64,
    /// Check (D, β)-quasi-randomness instead.
    #[arg(long = "D")]
    pub d: Option<f64>,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckPairArgs {
    /// Pair file (graph plus optional f_edges, A, B).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    /// Vertices of A (overrides the file).
    #[arg(long = "A", value_delimiter = ',')]
    pub a: Option<Vec<usize>>,
    /// Vertices of B (overrides the file).
    #[arg(long = "B", value_delimiter = ',')]
    pub b: Option<Vec<usize>>,
    /// Rescale to μ(V) = n, Σρ = C(n,2) first.
    #[arg(long)]
    pub normalize: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the verdict as a one-row CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum JFamily {
    /// J(m) = c.
    #[value(alias = "c")]
    Constant,
    /// J(m) = c·(m+1)².
    #[value(alias = "c*m^2", alias = "c*(m+1)^2")]
    Quadratic,
    /// J(m) = c·ℓ(m)²/ε³ with ℓ(m) = (L + atoms)/ε.
    #[value(alias = "c*l^2/eps^3")]
    Cluster,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Target bound on ‖f_err‖.
    #[arg(long)]
    pub eps: f64,
    #[arg(long = "J", value_enum, default_value_t = JFamily::Quadratic)]
    pub j: JFamily,
    #[arg(long, default_value_t = 100.0)]
    pub c: f64,
    /// ε inside the cluster family (defaults to --eps).
    #[arg(long)]
    pub cluster_eps: Option<f64>,
    /// L inside the cluster family.
    #[arg(long = "L", default_value_t = 4)]
    pub l: usize,
    #[arg(long = "Mmax", default_value_t = 64)]
    pub m_max: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long = "L", default_value_t = 4)]
    pub l: usize,
    #[arg(long = "Mmax", default_value_t = 64)]
    pub m_max: usize,
    /// Atom cap (default ⌊εμ(V)/μ_max⌋ − L).
    #[arg(long)]
    pub max_atoms: Option<usize>,
    /// η = ε⁶ / eta-factor.
    #[arg(long, default_value_t = 100.0)]
    pub eta_factor: f64,
    /// J(m) = j-factor·ℓ(m)²/ε³.
    #[arg(long, default_value_t = 100.0)]
    pub j_factor: f64,
    /// Restarts for measuring the host's quasi-randomness.
    #[arg(long, default_value_t = 8)]
    pub qr_restarts: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the clusters as a partition file for `verify`.
    #[arg(long)]
    pub partition_out: Option<PathBuf>,
    /// Write the pair classification table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub partition: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    /// Check the weights as given instead of the normalized graph.
    #[arg(long)]
    pub no_normalize: bool,
    #[command(flatten)]
    pub search: SearchArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the irregular-pair table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ConcentrationArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Probability spec the graph was drawn from.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoName {
    Star,
    VolumeCounterexample,
    GnpijConcentration,
}

#[derive(Args, Debug)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoName,
    /// Report path (default demo-<name>.json).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}
