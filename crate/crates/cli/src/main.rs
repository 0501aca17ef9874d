mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::BigRational;
use rankpoly::arith::parse_rational;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact evaluation, sampling, mixing diagnostics and modular reductions for
/// the mod-2 rank polynomial.
///
/// Fractions are read and printed as `num/den` (integers without a
/// denominator). Exit status: 0 on success, 1 on a domain error (bad graph,
/// limit exceeded, failed check), 2 on a usage error.
#[derive(Parser, Debug)]
#[command(name = "rankpoly", version)]
pub struct Cli {
    /// Worker threads for subset enumeration, replicas and per-prime queries.
    /// Results do not depend on this value.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Largest edge count accepted for exhaustive subset enumeration.
    #[arg(long, global = true, default_value_t = rankpoly::exact::DEFAULT_EDGE_LIMIT)]
    pub limit: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a polynomial exactly.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Exact counts derived from the rank polynomial.
    #[command(subcommand)]
    Count(CountCommand),
    /// Run a single-bond-flip chain and print one hex subset mask per sample,
    /// followed by a JSON summary line.
    #[command(subcommand)]
    Sample(SampleCommand),
    /// Exact or empirical mixing experiment.
    ///
    /// CSV columns: `step` followed by `tv_<start>` (exact mode, one column
    /// per start state given as a hex mask) or `tv_empirical` (empirical
    /// mode). The JSON summary `{tau, rho, ell, bound, bound_satisfied, ...}`
    /// goes to stdout when `--csv` is given and to stderr otherwise.
    Mix(MixArgs),
    /// Linear width of an edge ordering.
    Lw(LwArgs),
    /// Modular reductions; prints a single-line JSON certificate.
    #[command(subcommand)]
    Reduce(ReduceCommand),
    /// Run the built-in identity checks; prints a single-line JSON report.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    /// Structured JSON if the file starts with `{`, edge list otherwise.
    Auto,
    /// One `u v` pair per line.
    Edges,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Graph file, relative to the working directory.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

pub fn fraction(s: &str) -> Result<BigRational, String> {
    parse_rational(s)
}

#[derive(Subcommand, Debug)]
pub enum EvalCommand {
    /// R'_2(G; λ, μ) over the bipartite adjacency matrix.
    R2p(RankEvalArgs),
    /// R_2(G; λ, μ) over the full adjacency matrix.
    R2(RankEvalArgs),
    /// Random cluster partition function Z(G; q, μ).
    Zrc(ZrcArgs),
    /// Tutte polynomial T(G; x, y).
    Tutte(TutteEvalArgs),
}

#[derive(Args, Debug)]
pub struct RankEvalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub lambda: BigRational,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub mu: BigRational,
    /// Print a JSON record with the decimal approximation.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ZrcArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub q: BigRational,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub mu: BigRational,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct TutteEvalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub x: BigRational,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub y: BigRational,
    #[arg(long)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum CountCommand {
    /// Independent sets of a bipartite graph.
    Bis(CountArgs),
    /// Weighted labellings #PBIS(G; η).
    Pbis(PbisArgs),
    /// Matchings (including the empty one).
    Matchings(CountArgs),
    /// Perfect matchings.
    Perfect(CountArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Use direct enumeration instead of the rank polynomial.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PbisMethod {
    /// 2^|V| R'_2(G; 1/2, −η).
    Rank,
    /// Sum over all 2^n labellings.
    Oracle,
    /// Sum over twin-class counts.
    Twins,
}

#[derive(Args, Debug)]
pub struct PbisArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub eta: BigRational,
    #[arg(long, value_enum, default_value_t = PbisMethod::Rank)]
    pub method: PbisMethod,
}

#[derive(Subcommand, Debug)]
pub enum SampleCommand {
    /// Rank-weighted subgraphs, π(H) ∝ λ^rk(H) μ^|H| (bipartite graphs).
    Rws(SampleArgs),
    /// Random cluster model, π(H) ∝ q^κ(H) μ^|H|.
    Rc(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitArg {
    Empty,
    Full,
    Random,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// λ for `rws`, q for `rc`.
    #[arg(long = "lambda", visible_alias = "q", value_parser = fraction)]
    pub weight: BigRational,
    #[arg(long, value_parser = fraction)]
    pub mu: BigRational,
    /// Steps after burn-in.
    #[arg(long)]
    pub steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub burnin: u64,
    #[arg(long, default_value_t = 1)]
    pub thin: u64,
    #[arg(long, value_enum, default_value_t = InitArg::Empty)]
    pub init: InitArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Rws,
    Rc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    /// Edge ids in input order.
    Natural,
    /// Depth-first ordering of a forest.
    Dfs,
    /// Exact minimum over all orderings (small graphs).
    Optimal,
    /// Ordering derived from `--treedec`.
    Treedec,
    /// Permutation read from `--ordering-file`.
    File,
}

#[derive(Args, Debug, Clone)]
pub struct OrderingArgs {
    #[arg(long, value_enum, default_value_t = OrderingArg::Natural)]
    pub ordering: OrderingArg,
    /// Whitespace-separated permutation of the edge ids.
    #[arg(long)]
    pub ordering_file: Option<PathBuf>,
    /// Tree decomposition as JSON `{"tree_edges": [[a,b],..], "bags": [[v,..],..]}`.
    #[arg(long)]
    pub treedec: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartsArg {
    /// ∅, E and a minimizer of π.
    Extremes,
    /// Every state (m ≤ 12).
    All,
}

#[derive(Args, Debug)]
pub struct MixArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// λ for `rws`, q for `rc`.
    #[arg(long = "lambda", visible_alias = "q", value_parser = fraction)]
    pub weight: BigRational,
    #[arg(long, value_parser = fraction)]
    pub mu: BigRational,
    #[arg(long, default_value = "1/4", value_parser = fraction)]
    pub eps: BigRational,
    /// Exact TV curves from the transition operator (the default).
    #[arg(long, conflicts_with = "empirical")]
    pub exact: bool,
    /// Empirical TV from this many independent replicas started at ∅.
    #[arg(long)]
    pub empirical: Option<usize>,
    /// Checkpoint spacing in empirical mode.
    #[arg(long, default_value_t = 10)]
    pub every: u64,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    #[arg(long, value_enum, default_value_t = StartsArg::Extremes)]
    pub starts: StartsArg,
    #[command(flatten)]
    pub ordering: OrderingArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LwArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub ordering: OrderingArgs,
    /// Print `{width, profile, perm}` as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootArg {
    Auto,
    Positive,
    Negative,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCommand {
    /// T(G; x, y) from R'_2 residues on stretch-sums.
    Tutte(ReduceTutteArgs),
    /// #BIS(G) from #PBIS(·; η) residues on cloud graphs.
    Bis(ReduceBisArgs),
}

#[derive(Args, Debug)]
pub struct ReduceTutteArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub x: BigRational,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub y: BigRational,
    #[arg(long, default_value_t = rankpoly::reductions::DEFAULT_PRIME_CAP)]
    pub prime_cap: u64,
    /// Sign of μ = ±√(y−1).
    #[arg(long, value_enum, default_value_t = RootArg::Auto)]
    pub root: RootArg,
}

#[derive(Args, Debug)]
pub struct ReduceBisArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_parser = fraction, allow_hyphen_values = true)]
    pub eta: BigRational,
    #[arg(long, default_value_t = rankpoly::reductions::DEFAULT_PRIME_CAP)]
    pub prime_cap: u64,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Only the sub-second groups.
    #[arg(long)]
    pub quick: bool,
    /// Break the incremental rank update (checks that the suite notices).
    #[arg(long, hide = true)]
    pub inject_rank_fault: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
