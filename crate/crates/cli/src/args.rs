use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "wreath", version, about = "Exact spectral computations on wreath products U≀ℤ")]
pub struct Cli {
    /// Print the result as a JSON document.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized factorization.
    #[arg(long, global = true, default_value_t = wreath_core::numtheory::DEFAULT_SEED)]
    pub seed: u64,
    /// Step budget for each factorization.
    #[arg(long, global = true, default_value_t = wreath_core::numtheory::DEFAULT_FACTOR_BUDGET)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of T = e·t + t⁻¹·e with their masses.
    Spectrum(SpectrumArgs),
    /// Certified value of κ(p, q).
    Kappa(KappaArgs),
    /// dim ker(T − S) as a truncated gcd double sum.
    Dimker(DimkerArgs),
    /// Projection in ℚ[C_n] with prescribed trace.
    Projection(ProjectionArgs),
    /// Identities of the gcd series Φ(x, y).
    Series(SeriesArgs),
    /// Coefficient-gap witness m_Q.
    Gaps(GapsArgs),
    /// Runs the built-in verification suite.
    CheckAll(CheckAllArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Finite abelian group, e.g. C2 or C2xC3.
    #[arg(long = "U", default_value = "C2")]
    pub u: String,
    /// `avg`, or `trace:q` for a projection in ℚ[C_n] of trace q.
    #[arg(long, default_value = "avg")]
    pub e: String,
    /// `rot:m/n` for 2cos(mπ/n), or a decimal.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
    /// Largest n listed (and verified with --verify).
    #[arg(long, default_value_t = 4)]
    pub nmax: u64,
    /// Run the exact identity checks up to --nmax.
    #[arg(long)]
    pub verify: bool,
    /// Truncation of the completeness sum.
    #[arg(long = "N", default_value_t = 20)]
    pub n_terms: u64,
}

#[derive(Debug, Args)]
pub struct KappaArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 10)]
    pub digits: u64,
    /// Fixed number of series terms.
    #[arg(long)]
    pub terms: Option<u64>,
    /// Run the rationality probe against this bound, e.g. 1e100.
    #[arg(long)]
    pub bound: Option<String>,
}

#[derive(Debug, Args)]
pub struct DimkerArgs {
    #[arg(long = "X")]
    pub x: String,
    #[arg(long = "Y")]
    pub y: String,
    #[arg(long = "N", default_value_t = 200)]
    pub trunc_n: u64,
    /// Digits for the single-sum comparison.
    #[arg(long, default_value_t = 30)]
    pub digits: u64,
}

#[derive(Debug, Args)]
pub struct ProjectionArgs {
    #[arg(long)]
    pub q: String,
    /// Include the group ring element in the output.
    #[arg(long)]
    pub show_element: bool,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long = "K", default_value_t = 50)]
    pub k: u64,
}

#[derive(Debug, Args)]
pub struct GapsArgs {
    #[arg(long = "Q")]
    pub q: Option<u64>,
    #[arg(long = "N", default_value_t = 2)]
    pub n: u64,
    /// Check an explicit m instead of m_Q.
    #[arg(long)]
    pub m: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CheckAllArgs {
    /// Skip the slower checks.
    #[arg(long)]
    pub quick: bool,
}
