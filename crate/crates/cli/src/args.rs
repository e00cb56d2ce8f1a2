use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "regomax",
    version,
    about = "PageRank, CheiRank and reduced Google matrix analysis of directed networks",
    args_override_self = true
)]
pub struct Cli {
    /// Damping factor.
    #[arg(long, global = true, default_value_t = regomax::DEFAULT_ALPHA)]
    pub alpha: f64,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Directory receiving the output files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// `key=value` file supplying defaults for any long flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PageRank and CheiRank of every node, plus category-local ranks.
    Rank(RankArgs),
    /// Reduced Google matrix of a selection and its component weights.
    Reduce(ReduceCmdArgs),
    /// PageRank sensitivity of target nodes to links of the reduced matrix.
    Sensitivity(SensitivityArgs),
    /// Friend or follower network around seed nodes.
    Network(NetworkArgs),
    /// Timing of ranking and reduction under node orderings and batch sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge list, one `src dst` pair per line.
    #[arg(long)]
    pub edges: Option<PathBuf>,

    /// Node labels, `id<TAB>label` per line.
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Minimum node count, for graphs whose highest ids are isolated.
    #[arg(long)]
    pub nodes: Option<usize>,

    #[arg(long)]
    pub drop_self_loops: bool,

    /// L1 tolerance of the power iterations.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,

    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reorder {
    None,
    Cmk,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Per-column L1 increment at which the indirect series stops.
    #[arg(long, default_value_t = regomax::reduced::DEFAULT_SERIES_TOL)]
    pub series_tol: f64,

    #[arg(long, default_value_t = regomax::reduced::DEFAULT_BATCH_SIZE)]
    pub batch_size: usize,

    #[arg(long, default_value_t = 100_000)]
    pub max_terms: usize,

    /// Node ordering used for the sparse sweeps.
    #[arg(long, value_enum, default_value_t = Reorder::None)]
    pub reorder: Reorder,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    /// Selection CSV; enables rankjoin.csv and rankplane.csv.
    #[arg(long)]
    pub selection: Option<PathBuf>,

    /// Category plotted in rankplane.csv (default: the first one).
    #[arg(long)]
    pub category: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceCmdArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[command(flatten)]
    pub series: SeriesArgs,

    #[arg(long)]
    pub selection: Option<PathBuf>,

    /// Sum absolute values when computing weights.
    #[arg(long)]
    pub weights_abs: bool,

    /// Export the `rows,cols` category sub-block of every component.
    #[arg(long, value_name = "ROWS,COLS")]
    pub sector: Vec<String>,
}

/// Where the reduced matrix comes from: a CSV written by `reduce`, or a
/// fresh computation from the graph.
#[derive(Debug, Clone, Args)]
pub struct MatrixInput {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[command(flatten)]
    pub series: SeriesArgs,

    #[arg(long)]
    pub selection: Option<PathBuf>,

    /// Precomputed reduced matrix (reduced_GR.csv).
    #[arg(long)]
    pub reduced: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Central,
    OneSided,
}

#[derive(Debug, Clone, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub input: MatrixInput,

    /// Category of the perturbed link sources.
    #[arg(long, default_value = "bank")]
    pub sources: String,

    /// Category of the link targets whose PageRank is observed.
    #[arg(long, default_value = "country")]
    pub targets: String,

    #[arg(long, default_value_t = regomax::sensitivity::DEFAULT_DELTA)]
    pub delta: f64,

    #[arg(long, value_enum, default_value_t = MethodArg::Central)]
    pub method: MethodArg,

    /// L1 tolerance of the perturbed PageRank computations.
    #[arg(long, default_value_t = 1e-14)]
    pub sensitivity_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Friends,
    Followers,
}

#[derive(Debug, Clone, Args)]
pub struct NetworkArgs {
    #[command(flatten)]
    pub input: MatrixInput,

    /// Matrix the links are chosen from: GR, Grr+Gqr or Gqr.
    #[arg(long, default_value = "GR")]
    pub component: String,

    #[arg(long, value_enum, default_value_t = ModeArg::Friends)]
    pub mode: ModeArg,

    /// Comma-separated seed labels (default: top PageRank member per group).
    #[arg(long)]
    pub seeds: Option<String>,

    /// Expandable category.
    #[arg(long, default_value = "bank")]
    pub primary: String,

    /// Terminal category.
    #[arg(long, default_value = "country")]
    pub secondary: String,

    #[arg(long, default_value_t = 4)]
    pub n_primary: usize,

    #[arg(long, default_value_t = 2)]
    pub n_secondary: usize,

    #[arg(long, default_value_t = 2)]
    pub max_level: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub graph: GraphArgs,

    #[arg(long, default_value_t = 1e-13)]
    pub series_tol: f64,

    #[arg(long)]
    pub selection: Option<PathBuf>,

    /// Size of the synthetic graph used when no edge list is given.
    #[arg(long, default_value_t = 20_000)]
    pub synthetic_nodes: usize,

    #[arg(long, default_value_t = 5.0)]
    pub synthetic_degree: f64,

    /// Number of random nodes selected when no selection is given.
    #[arg(long, default_value_t = 20)]
    pub selection_size: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
