use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Emit, Families, Format, IntRange};

#[derive(Parser, Debug)]
#[command(name = "repstab", version, about = "Exact cohomology characters and representation-stability checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Directory for cached artifacts
    #[arg(long, global = true, env = "REPSTAB_CACHE")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads (defaults to available cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Lift the default size ceilings (large runs can take hours)
    #[arg(long, global = true)]
    pub unguarded: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimensions, characters and decompositions over a grid
    Compute(ComputeArgs),
    /// Injectivity, orbit-spanning and multiplicity stability along n -> n+1
    Stability(StabilityArgs),
    /// Fit a character polynomial to computed characters
    FitCharpoly(FitArgs),
    /// Fit a polynomial in n to computed dimensions
    FitBetti(FitArgs),
    /// Coinvariants with frozen labels and their transition maps
    Coinvariants(CoinvariantArgs),
    /// Whether pullbacks from gen-m labels generate the piece under S_n
    GenDegree(GenDegreeArgs),
    /// Run the built-in check suite
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    /// Family name, comma list, or `all`
    #[arg(long)]
    pub family: Families,
    #[arg(long, default_value = "1")]
    pub degree: IntRange,
    #[arg(long)]
    pub n: IntRange,
    #[arg(long, value_enum, default_value = "dim")]
    pub emit: Emit,
}

#[derive(Args, Debug)]
pub struct StabilityArgs {
    #[arg(long)]
    pub family: Families,
    #[arg(long, default_value = "1")]
    pub degree: usize,
    #[arg(long)]
    pub n: IntRange,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long)]
    pub family: Families,
    #[arg(long, default_value = "1")]
    pub degree: usize,
    /// Levels the fit is solved on
    #[arg(long)]
    pub fit: IntRange,
    /// Levels the fit is validated on
    #[arg(long)]
    pub check: Option<IntRange>,
    #[arg(long)]
    pub max_deg: usize,
}

#[derive(Args, Debug)]
pub struct CoinvariantArgs {
    #[arg(long)]
    pub family: Families,
    #[arg(long, default_value = "1")]
    pub degree: usize,
    /// Number of frozen labels
    #[arg(long, default_value = "0")]
    pub a: usize,
    #[arg(long)]
    pub n: IntRange,
}

#[derive(Args, Debug)]
pub struct GenDegreeArgs {
    #[arg(long)]
    pub family: Families,
    #[arg(long, default_value = "1")]
    pub degree: usize,
    #[arg(long)]
    pub gen_m: usize,
    #[arg(long)]
    pub n: IntRange,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Run only the named checks (c1..c11)
    #[arg(long)]
    pub only: Vec<String>,
}
