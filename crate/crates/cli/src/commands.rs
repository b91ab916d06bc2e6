use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use xclust::instances::{
    gen_blobs, gen_imm_adversarial, gen_kmeans_lb, gen_kmeans_lb_default, gen_kmedians_lb,
    gen_kmedians_lb_with_dim, InstanceBundle,
};

use crate::args::{ClusterArgs, CompareArgs, EvalArgs, GenArgs, Instance, Method, Variant};
use crate::build::{
    build_tree, check_method, evaluate, load_inputs, reference_mode, Evaluation, PointsUse,
};
use crate::error::{CliError, CliResult};
use crate::io::{
    read_centers, read_points, read_tree, write_centers, write_json, write_points, write_tree,
    AuditEntry,
};

#[derive(Debug, Serialize)]
pub struct GenMeta {
    pub generator: &'static str,
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub seed: Option<u64>,
    pub planted_kmedians_cost: Option<f64>,
    pub planted_kmeans_cost: Option<f64>,
    pub properties: BTreeMap<&'static str, f64>,
}

impl From<&InstanceBundle> for GenMeta {
    fn from(b: &InstanceBundle) -> Self {
        GenMeta {
            generator: b.generator,
            k: b.k,
            d: b.d,
            n: b.n(),
            seed: b.seed,
            planted_kmedians_cost: b.planted_kmedians_cost,
            planted_kmeans_cost: b.planted_kmeans_cost,
            properties: b.properties.iter().copied().collect(),
        }
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, instance: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {instance}")))
}

fn forbid<T>(value: &Option<T>, flag: &str, instance: &str) -> CliResult<()> {
    match value {
        Some(_) => Err(CliError::Usage(format!(
            "--{flag} does not apply to {instance}"
        ))),
        None => Ok(()),
    }
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let seed = args.seed.unwrap_or(0);
    let bundle = match args.instance {
        Instance::KmediansLb => {
            let name = "kmedians-lb";
            forbid(&args.n, "n", name)?;
            forbid(&args.spread, "spread", name)?;
            let k = require(args.k, "k", name)?;
            match args.d {
                Some(d) => gen_kmedians_lb_with_dim(k, d, seed)?,
                None => gen_kmedians_lb(k, seed)?,
            }
        }
        Instance::KmeansLb => {
            let name = "kmeans-lb";
            forbid(&args.n, "n", name)?;
            forbid(&args.spread, "spread", name)?;
            let k = require(args.k, "k", name)?;
            match args.d {
                Some(d) => gen_kmeans_lb(k, d, seed)?,
                None => gen_kmeans_lb_default(k, seed)?,
            }
        }
        Instance::ImmAdversarial => {
            let name = "imm-adversarial (it is deterministic)";
            forbid(&args.d, "d", name)?;
            forbid(&args.n, "n", name)?;
            forbid(&args.spread, "spread", name)?;
            forbid(&args.seed, "seed", name)?;
            gen_imm_adversarial(require(args.k, "k", name)?)?
        }
        Instance::Blobs => {
            let name = "blobs";
            let k = require(args.k, "k", name)?;
            let d = require(args.d, "d", name)?;
            let n = require(args.n, "n", name)?;
            gen_blobs(k, d, n, args.spread.unwrap_or(1.0), seed)?
        }
    };
    write_points(&args.out_points, &bundle.data)?;
    if let Some(path) = &args.out_centers {
        write_centers(path, &bundle.centers)?;
    }
    if let Some(path) = &args.out_meta {
        write_json(path, &GenMeta::from(&bundle))?;
    }
    eprintln!(
        "generated {}: n={} k={} d={}",
        bundle.generator,
        bundle.n(),
        bundle.k,
        bundle.d
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct ClusterStats {
    method: &'static str,
    splits: usize,
    work: usize,
    samples: u64,
    build_seconds: f64,
}

pub fn cmd_cluster(args: &ClusterArgs) -> CliResult<()> {
    let method = args.method;
    check_method(method, &args.build)?;
    if args.build.variant == Some(Variant::Refit) && args.out_centers.is_none() {
        return Err(CliError::Usage(
            "--variant refit moves the centers; pass --out-centers to keep them".into(),
        ));
    }
    let inputs = load_inputs(&args.build, PointsUse::for_method(method))?;
    let start = Instant::now();
    let built = build_tree(method, &inputs, &args.build, args.build.seed)?;
    let build_seconds = start.elapsed().as_secs_f64();

    write_tree(&args.out_tree, &built.tree)?;
    let reloaded = read_tree(&args.out_tree)?;
    if reloaded != built.tree {
        return Err(CliError::Invariant(format!(
            "{} does not reload to the tree that was written",
            args.out_tree.display()
        )));
    }
    match &args.out_centers {
        Some(path) => write_centers(path, &built.centers)?,
        None if inputs.fitted => {
            eprintln!("warning: fitted centers were not saved (use --out-centers)")
        }
        None => {}
    }

    let stats = ClusterStats {
        method: method.name(),
        splits: built.stats.splits,
        work: built.stats.work,
        samples: built.stats.samples,
        build_seconds,
    };
    eprintln!(
        "{}: k={} splits={} work={} samples={} height={} time={:.6}s",
        stats.method,
        built.tree.k(),
        stats.splits,
        stats.work,
        stats.samples,
        built.tree.height(),
        stats.build_seconds
    );
    if let Some(path) = &args.stats {
        write_json(path, &stats)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub objective: &'static str,
    pub reference: &'static str,
    pub tree_cost: f64,
    pub reference_cost: f64,
    pub ratio: Option<f64>,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub height: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub audit: Vec<AuditEntry>,
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let mode = reference_mode(&args.reference, args.objective)?;
    let tree = read_tree(&args.tree)?;
    let data = read_points(&args.points)?;
    let centers = read_centers(&args.centers)?;
    for (what, dim) in [("points", data.dim()), ("centers", centers.dim())] {
        if dim != tree.dim() {
            return Err(CliError::Data(format!(
                "tree has dimension {} but {what} have dimension {dim}",
                tree.dim()
            )));
        }
    }
    tree.validate_against(&centers)
        .map_err(|e| CliError::Data(format!("tree does not match the centers: {e}")))?;
    let Evaluation {
        tree_cost,
        reference_cost,
        ratio,
    } = evaluate(
        &tree,
        &data,
        &centers,
        &centers,
        args.objective.objective(),
        mode,
    )?;
    let report = Report {
        objective: args.objective.name(),
        reference: mode.name(),
        tree_cost,
        reference_cost,
        ratio,
        n: data.len(),
        k: tree.k(),
        d: tree.dim(),
        height: tree.height(),
        audit: tree.audit().iter().map(AuditEntry::from).collect(),
    };
    write_json(&args.out_report, &report)?;
    eprintln!(
        "{} cost {tree_cost} vs reference {reference_cost}: ratio {}",
        report.objective,
        ratio.map_or("undefined".to_string(), |r| r.to_string())
    );
    Ok(())
}

#[derive(Debug, Clone)]
struct TrialResult {
    method: Method,
    trial: usize,
    seed: u64,
    eval: Evaluation,
    height: usize,
    splits: usize,
    work: usize,
    build_seconds: f64,
}

/// Mean and population standard deviation; exactly `(x, 0)` when all values
/// equal `x`.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    if values.iter().all(|&v| v == values[0]) {
        return (values[0], 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub const COMPARE_HEADER: [&str; 9] = [
    "method",
    "row",
    "seed",
    "cost",
    "ratio",
    "height",
    "cost_std",
    "ratio_std",
    "height_std",
];

fn opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    for &method in &args.methods {
        check_method(method, &args.build)?;
    }
    let mode = reference_mode(&args.reference, args.build.objective)?;
    let inputs = load_inputs(&args.build, PointsUse::Required)?;
    let data = inputs.data.as_ref().expect("points are required");
    let objective = args.build.objective.objective();

    let jobs: Vec<(Method, usize)> = args
        .methods
        .iter()
        .flat_map(|&m| (0..args.trials).map(move |t| (m, t)))
        .collect();
    let results: Vec<TrialResult> = jobs
        .par_iter()
        .map(|&(method, trial)| {
            let seed = args.build.seed.wrapping_add(trial as u64);
            let start = Instant::now();
            let built = build_tree(method, &inputs, &args.build, seed)?;
            let build_seconds = start.elapsed().as_secs_f64();
            let eval = evaluate(
                &built.tree,
                data,
                &built.centers,
                &inputs.centers,
                objective,
                mode,
            )?;
            Ok(TrialResult {
                method,
                trial,
                seed,
                eval,
                height: built.tree.height(),
                splits: built.stats.splits,
                work: built.stats.work,
                build_seconds,
            })
        })
        .collect::<CliResult<_>>()?;

    write_compare_csv(&args.out_csv, &args.methods, &results)?;
    if let Some(path) = &args.stats {
        write_compare_stats(path, &results)?;
    }
    Ok(())
}

fn write_compare_csv(path: &Path, methods: &[Method], results: &[TrialResult]) -> CliResult<()> {
    let err = |e: csv::Error| CliError::io(path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(COMPARE_HEADER).map_err(err)?;
    for &method in methods {
        let rows: Vec<&TrialResult> = results.iter().filter(|r| r.method == method).collect();
        for r in &rows {
            w.write_record([
                method.name().to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.eval.tree_cost.to_string(),
                opt(r.eval.ratio),
                r.height.to_string(),
                String::new(),
                String::new(),
                String::new(),
            ])
            .map_err(err)?;
        }
        let costs: Vec<f64> = rows.iter().map(|r| r.eval.tree_cost).collect();
        let ratios: Option<Vec<f64>> = rows.iter().map(|r| r.eval.ratio).collect();
        let heights: Vec<f64> = rows.iter().map(|r| r.height as f64).collect();
        let (cost, cost_std) = mean_std(&costs);
        let ratio = ratios.map(|r| mean_std(&r));
        let (height, height_std) = mean_std(&heights);
        w.write_record([
            method.name().to_string(),
            "summary".to_string(),
            String::new(),
            cost.to_string(),
            opt(ratio.map(|r| r.0)),
            height.to_string(),
            cost_std.to_string(),
            opt(ratio.map(|r| r.1)),
            height_std.to_string(),
        ])
        .map_err(err)?;
        eprintln!(
            "{}: {} trials, mean cost {cost}, mean ratio {}",
            method.name(),
            rows.len(),
            opt(ratio.map(|r| r.0))
        );
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn write_compare_stats(path: &Path, results: &[TrialResult]) -> CliResult<()> {
    let err = |e: csv::Error| CliError::io(path, e);
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["method", "trial", "seed", "build_seconds", "splits", "work"])
        .map_err(err)?;
    for r in results {
        w.write_record([
            r.method.name().to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.build_seconds.to_string(),
            r.splits.to_string(),
            r.work.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_of_constant_values_is_exact() {
        assert_eq!(mean_std(&[0.1, 0.1, 0.1]), (0.1, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!((m, s), (2.0, 1.0));
    }
}
