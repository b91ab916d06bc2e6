//! Dispatch from command-line choices to the library builders, and costing.

use std::path::Path;

use serde::Serialize;
use xclust::instances::solve_reference;
use xclust::kmeans::{build_threshold_tree_seeded, KMeansMethod};
use xclust::kmedians::{build_fast, build_simplified, BoundedDomain};
use xclust::two_means::{exact_2means_tree, TwoMeansVariant};
use xclust::{
    nearest_center_cost, refit_tree_cost, tree_cost, BuildStats, CenterSet, Dataset, Objective,
    ThresholdTree,
};

use crate::args::{BuildArgs, Method, ObjectiveArg, Reference, ReferenceArgs, Variant};
use crate::error::{CliError, CliResult};
use crate::io::{read_centers, read_json, read_points};

/// Points and centers after flag validation.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub objective: ObjectiveArg,
    pub data: Option<Dataset>,
    pub centers: CenterSet,
    /// True when the centers were fitted rather than read.
    pub fitted: bool,
}

pub fn check_method(method: Method, args: &BuildArgs) -> CliResult<()> {
    if !method.supports(args.objective) {
        return Err(CliError::Usage(format!(
            "method {} does not apply to objective {}",
            method.name(),
            args.objective.name()
        )));
    }
    if args.variant.is_some() && method != Method::TwoMeansExact {
        return Err(CliError::Usage(
            "--variant only applies to 2means-exact".into(),
        ));
    }
    if args.domain.is_some() && method != Method::MedianSimplified {
        return Err(CliError::Usage(
            "--domain only applies to median-simplified".into(),
        ));
    }
    Ok(())
}

/// How a command uses `--points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointsUse {
    Required,
    IfGiven,
    Ignored,
}

impl PointsUse {
    pub fn for_method(method: Method) -> Self {
        match method {
            m if m.needs_points() => PointsUse::Required,
            Method::MedianSimplified => PointsUse::IfGiven,
            _ => PointsUse::Ignored,
        }
    }
}

/// Reads or fits centers. Fitting always reads the points.
pub fn load_inputs(args: &BuildArgs, use_points: PointsUse) -> CliResult<Inputs> {
    if use_points == PointsUse::Required && args.points.is_none() {
        return Err(CliError::Usage("--points is required here".into()));
    }
    let data = match &args.points {
        Some(p) if use_points != PointsUse::Ignored || args.fit_k.is_some() => {
            Some(read_points(p)?)
        }
        _ => None,
    };
    let (centers, fitted) = match (&args.centers, args.fit_k) {
        (Some(path), None) => (read_centers(path)?, false),
        (None, Some(k)) => {
            let data = data
                .as_ref()
                .ok_or_else(|| CliError::Usage("--fit-k needs --points".into()))?;
            let objective = match args.objective {
                ObjectiveArg::Kmedians => Objective::KMedians,
                _ => Objective::KMeans,
            };
            (solve_reference(data, k, objective, args.seed)?, true)
        }
        _ => {
            return Err(CliError::Usage(
                "exactly one of --centers and --fit-k is required".into(),
            ))
        }
    };
    if let Some(data) = &data {
        if data.dim() != centers.dim() {
            return Err(CliError::Data(format!(
                "points have dimension {} but centers have dimension {}",
                data.dim(),
                centers.dim()
            )));
        }
    }
    centers.ensure_distinct()?;
    Ok(Inputs {
        objective: args.objective,
        data,
        centers,
        fitted,
    })
}

/// A built tree together with the centers its leaves name.
#[derive(Debug, Clone)]
pub struct Built {
    pub tree: ThresholdTree,
    pub centers: CenterSet,
    pub stats: BuildStats,
}

pub fn build_tree(
    method: Method,
    inputs: &Inputs,
    args: &BuildArgs,
    seed: u64,
) -> CliResult<Built> {
    let centers = &inputs.centers;
    let data = || {
        inputs
            .data
            .as_ref()
            .ok_or_else(|| CliError::Usage(format!("{} needs --points", method.name())))
    };
    let plain = |build: xclust::TreeBuild| Built {
        tree: build.tree,
        centers: centers.clone(),
        stats: build.stats,
    };
    let built = match method {
        Method::MedianRandom => plain(build_fast(centers, seed)?),
        Method::MedianSimplified => {
            let domain = match args.domain {
                Some(b) => BoundedDomain::new(b)?,
                None => BoundedDomain::covering(centers, inputs.data.as_ref()),
            };
            plain(build_simplified(centers, domain, seed)?)
        }
        Method::MeanSweep | Method::MeanRandom | Method::Imm => {
            let kind = match method {
                Method::MeanSweep => KMeansMethod::Sweep,
                Method::MeanRandom => KMeansMethod::Random,
                _ => KMeansMethod::Imm,
            };
            let data = if method == Method::MeanRandom {
                None
            } else {
                Some(data()?)
            };
            plain(build_threshold_tree_seeded(
                data,
                centers,
                kind,
                inputs.objective.objective(),
                seed,
            )?)
        }
        Method::TwoMeansExact => {
            let variant = match args.variant.unwrap_or(Variant::Fixed) {
                Variant::Fixed => TwoMeansVariant::FixedCenters,
                Variant::Refit => TwoMeansVariant::Refit,
            };
            let exact = exact_2means_tree(data()?, centers, variant)?;
            Built {
                tree: exact.tree,
                centers: exact.centers,
                stats: BuildStats {
                    splits: 1,
                    work: 1,
                    ..BuildStats::default()
                },
            }
        }
    };
    built.tree.validate_against(&built.centers).map_err(|e| {
        CliError::Invariant(format!("{} produced an invalid tree: {e}", method.name()))
    })?;
    Ok(built)
}

/// How the tree's cost and the reference cost are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceMode {
    FixedCenters,
    Refit,
    Given(f64),
}

impl ReferenceMode {
    pub fn name(self) -> &'static str {
        match self {
            ReferenceMode::FixedCenters => Reference::FixedCenters.name(),
            ReferenceMode::Refit => Reference::Refit.name(),
            ReferenceMode::Given(_) => Reference::File.name(),
        }
    }
}

pub fn reference_mode(args: &ReferenceArgs, objective: ObjectiveArg) -> CliResult<ReferenceMode> {
    match (args.reference, &args.reference_file) {
        (Reference::FixedCenters, None) => Ok(ReferenceMode::FixedCenters),
        (Reference::Refit, None) => Ok(ReferenceMode::Refit),
        (Reference::File, Some(path)) => {
            Ok(ReferenceMode::Given(reference_from_file(path, objective)?))
        }
        (Reference::File, None) => Err(CliError::Usage(
            "--reference file needs --reference-file".into(),
        )),
        (_, Some(_)) => Err(CliError::Usage(
            "--reference-file only applies with --reference file".into(),
        )),
    }
}

/// Accepts a report (`reference_cost`) or generator metadata
/// (`planted_kmedians_cost` / `planted_kmeans_cost`).
fn reference_from_file(path: &Path, objective: ObjectiveArg) -> CliResult<f64> {
    let value: serde_json::Value = read_json(path)?;
    let planted = match objective.objective() {
        Objective::KMedians => Some("planted_kmedians_cost"),
        Objective::KMeans => Some("planted_kmeans_cost"),
        Objective::KCenter => None,
    };
    let found = value
        .get("reference_cost")
        .or_else(|| planted.and_then(|key| value.get(key)))
        .and_then(serde_json::Value::as_f64);
    match found {
        Some(v) if v.is_finite() && v >= 0.0 => Ok(v),
        Some(v) => Err(CliError::io(
            path,
            format!("reference cost {v} is not usable"),
        )),
        None => Err(CliError::io(
            path,
            format!(
                "no reference_cost or planted cost for objective {}",
                objective.name()
            ),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub tree_cost: f64,
    pub reference_cost: f64,
    /// `None` when the reference is zero and the tree cost is not.
    pub ratio: Option<f64>,
}

/// `reference_centers` supplies the nearest-center reference; for refit
/// 2-means trees they differ from the centers the leaves name.
pub fn evaluate(
    tree: &ThresholdTree,
    data: &Dataset,
    leaf_centers: &CenterSet,
    reference_centers: &CenterSet,
    objective: Objective,
    mode: ReferenceMode,
) -> CliResult<Evaluation> {
    let tree_cost = match mode {
        ReferenceMode::Refit => refit_tree_cost(tree, data, leaf_centers, objective)?,
        _ => tree_cost(tree, data, leaf_centers, objective)?,
    }
    .total_cost;
    let reference_cost = match mode {
        ReferenceMode::Given(v) => v,
        _ => nearest_center_cost(data, reference_centers, objective)?.total_cost,
    };
    let ratio = if reference_cost > 0.0 {
        Some(tree_cost / reference_cost)
    } else if tree_cost == 0.0 {
        Some(1.0)
    } else {
        None
    };
    Ok(Evaluation {
        tree_cost,
        reference_cost,
        ratio,
    })
}
