use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "kmono", version, about = "Exact computations for the k-monogenic complex on R^6")]
pub struct Cli {
    /// Print the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions of the fibers V_l and of their contraction-free parts.
    Dims {
        #[arg(long)]
        k: usize,
    },
    /// Run one of the exact verification suites.
    Verify(VerifyArgs),
    /// Symbol maps at a covector v.
    #[command(subcommand)]
    Symbol(SymbolCommand),
    /// Solve D_l u = f for a polynomial section f read from a file.
    Solve(SolveArgs),
    /// Write a random contraction-free polynomial section.
    RandomField(RandomFieldArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Complex,
    Adjoint,
    Commutator,
    Estimate,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Complex => "complex",
            Suite::Adjoint => "adjoint",
            Suite::Commutator => "commutator",
            Suite::Estimate => "estimate",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub suite: Suite,
    #[arg(long)]
    pub k: usize,
    /// Polynomial degree of the random sections (largest degree for the
    /// estimate and the commutator).
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one level (estimate: 1..=3, complex and adjoint: 0..=2).
    #[arg(long)]
    pub l: Option<usize>,
    /// Allow k = 4, 5 for the estimate; results are flagged.
    #[arg(long)]
    pub exploratory: bool,
}

#[derive(Debug, Subcommand)]
pub enum SymbolCommand {
    /// Ranks of the symbol maps and the exactness of the symbol sequence.
    Exactness(ExactnessArgs),
    /// Constructive preimages under sigma_level.
    Preimage(PreimageArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CovectorArgs {
    /// A covector as six comma-separated rationals, e.g. 1,0,-1/2,0,0,3.
    #[arg(long = "v", value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "samples")]
    pub v: Option<Vec<String>>,
    /// Number of random rational covectors.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ExactnessArgs {
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub covector: CovectorArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PreimageArgs {
    #[arg(long)]
    pub k: usize,
    /// Which map to invert: 0, 1 or 2.
    #[arg(long)]
    pub level: usize,
    /// Kernel elements sampled per covector.
    #[arg(long, default_value_t = 5)]
    pub count: usize,
    #[command(flatten)]
    pub covector: CovectorArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub k: usize,
    /// Solve D_level u = f; f lives at level + 1.
    #[arg(long)]
    pub level: usize,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Allow k = 4, 5; the result is flagged as outside the hypothesis.
    #[arg(long)]
    pub exploratory: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RandomFieldArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub level: usize,
    #[arg(long)]
    pub degree: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
    /// Write D_level g instead of the random g itself (data for `solve`).
    #[arg(long)]
    pub apply_d: bool,
}
