use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use xclust::Objective;

#[derive(Debug, Parser)]
#[command(
    name = "xclust",
    version,
    about = "Explainable clustering with axis-aligned threshold trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a benchmark or lower-bound instance.
    Gen(GenArgs),
    /// Build a threshold tree for a set of centers.
    Cluster(ClusterArgs),
    /// Cost a tree against a dataset and a reference.
    Eval(EvalArgs),
    /// Run several methods over seeded trials and tabulate costs.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Instance {
    KmediansLb,
    KmeansLb,
    ImmAdversarial,
    Blobs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Kmedians,
    Kmeans,
    #[value(name = "2means")]
    TwoMeans,
    Kcenter,
}

impl ObjectiveArg {
    /// Cost function; 2-means is costed as k-means.
    pub fn objective(self) -> Objective {
        match self {
            ObjectiveArg::Kmedians => Objective::KMedians,
            ObjectiveArg::Kmeans | ObjectiveArg::TwoMeans => Objective::KMeans,
            ObjectiveArg::Kcenter => Objective::KCenter,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveArg::Kmedians => "kmedians",
            ObjectiveArg::Kmeans => "kmeans",
            ObjectiveArg::TwoMeans => "2means",
            ObjectiveArg::Kcenter => "kcenter",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    MedianRandom,
    MedianSimplified,
    MeanSweep,
    MeanRandom,
    Imm,
    #[value(name = "2means-exact")]
    TwoMeansExact,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::MedianRandom => "median-random",
            Method::MedianSimplified => "median-simplified",
            Method::MeanSweep => "mean-sweep",
            Method::MeanRandom => "mean-random",
            Method::Imm => "imm",
            Method::TwoMeansExact => "2means-exact",
        }
    }

    pub fn supports(self, objective: ObjectiveArg) -> bool {
        use Method::*;
        use ObjectiveArg::*;
        matches!(
            (objective, self),
            (Kmedians, MedianRandom | MedianSimplified | Imm)
                | (Kmeans, MeanSweep | MeanRandom | Imm)
                | (TwoMeans, TwoMeansExact)
        )
    }

    /// Whether the tree depends on the dataset and not only on the centers.
    pub fn needs_points(self) -> bool {
        matches!(
            self,
            Method::MeanSweep | Method::Imm | Method::TwoMeansExact
        )
    }

    pub fn is_deterministic(self) -> bool {
        self.needs_points()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Fixed,
    Refit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    FixedCenters,
    Refit,
    File,
}

impl Reference {
    pub fn name(self) -> &'static str {
        match self {
            Reference::FixedCenters => "fixed-centers",
            Reference::Refit => "refit",
            Reference::File => "file",
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub instance: Instance,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Number of points (blobs only).
    #[arg(long)]
    pub n: Option<usize>,
    /// Per-coordinate standard deviation (blobs only, default 1).
    #[arg(long)]
    pub spread: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_points: PathBuf,
    #[arg(long)]
    pub out_centers: Option<PathBuf>,
    #[arg(long)]
    pub out_meta: Option<PathBuf>,
}

/// Inputs shared by `cluster` and `compare`.
#[derive(Debug, Args)]
#[command(group(ArgGroup::new("center_source").required(true).args(["centers", "fit_k"])))]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub centers: Option<PathBuf>,
    /// Fit K reference centers on the points instead of reading them.
    #[arg(long, value_name = "K")]
    pub fit_k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// 2means-exact only.
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    /// Half-width B of the domain [-B, B]^d (median-simplified only).
    #[arg(long)]
    pub domain: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub build: BuildArgs,
    #[arg(long, value_enum)]
    pub method: Method,
    #[arg(long)]
    pub out_tree: PathBuf,
    /// Centers the tree's leaves refer to (fitted or refit centers).
    #[arg(long)]
    pub out_centers: Option<PathBuf>,
    /// Build statistics as JSON; always echoed to stderr.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReferenceArgs {
    #[arg(long, value_enum, default_value = "fixed-centers")]
    pub reference: Reference,
    /// JSON file with `reference_cost` or `planted_<objective>_cost`.
    #[arg(long)]
    pub reference_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub tree: PathBuf,
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long)]
    pub centers: PathBuf,
    #[arg(long, value_enum)]
    pub objective: ObjectiveArg,
    #[command(flatten)]
    pub reference: ReferenceArgs,
    #[arg(long)]
    pub out_report: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub trials: usize,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub methods: Vec<Method>,
    #[command(flatten)]
    pub build: BuildArgs,
    #[command(flatten)]
    pub reference: ReferenceArgs,
    #[arg(long)]
    pub out_csv: PathBuf,
    /// Per-trial build times as CSV.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}
