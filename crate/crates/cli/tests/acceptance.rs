//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Pass criterion numbers as arguments to run a subset.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xclust::instances::{
    admissible_first_splits, gen_blobs, gen_imm_adversarial, gen_kmeans_lb,
    gen_kmedians_lb_with_dim, min_differing_coordinates, partition_median_bound, solve_reference,
    tree_opt,
};
use xclust::kmeans::{
    build_threshold_tree_seeded, misclassification_cost_bound, mistake_ratio_bound, KMeansMethod,
    MarginIntervals,
};
use xclust::kmedians::{build_fast, build_simplified, BoundedDomain};
use xclust::two_means::{algebraic_lemma_check, exact_2means_tree, TwoMeansVariant};
use xclust::{nearest_center_cost, tree_cost, CenterSet, Dataset, Node, Objective, TreeBuild};
use xclust_cli::args::{BuildArgs, Method, ObjectiveArg, Variant};
use xclust_cli::build::{build_tree, load_inputs, PointsUse};
use xclust_cli::io::{read_centers, read_points, read_tree};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn kmedians_ratio(tree: &xclust::ThresholdTree, data: &Dataset, centers: &CenterSet) -> f64 {
    let t = tree_cost(tree, data, centers, Objective::KMedians)
        .unwrap()
        .total_cost;
    t / nearest_center_cost(data, centers, Objective::KMedians)
        .unwrap()
        .total_cost
}

fn random_centers(k: usize, d: usize, seed: u64) -> CenterSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CenterSet::new(
        (0..k)
            .map(|_| (0..d).map(|_| rng.random::<f64>()).collect())
            .collect(),
    )
    .unwrap()
}

fn c1_distribution_equivalence() -> Outcome {
    let centers = CenterSet::new(vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![0.0, 4.0]]).unwrap();
    let domain = BoundedDomain::new(8.0).unwrap();
    let probes: [[f64; 2]; 5] = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [2.0, 2.0], [3.0, 1.0]];
    let trials = 200_000u64;
    let tally = |build: &dyn Fn(u64) -> TreeBuild, offset: u64| {
        let mut counts = [[0u64; 3]; 5];
        for s in 0..trials {
            let tree = build(offset + s).tree;
            for (p, probe) in probes.iter().enumerate() {
                counts[p][tree.assign(probe).unwrap()] += 1;
            }
        }
        counts
    };
    let simplified = tally(&|s| build_simplified(&centers, domain, s).unwrap(), 0);
    let fast = tally(&|s| build_fast(&centers, s).unwrap(), 1 << 40);
    let tvs: Vec<f64> = (0..5)
        .map(|p| {
            0.5 * (0..3)
                .map(|c| (simplified[p][c] as f64 - fast[p][c] as f64).abs() / trials as f64)
                .sum::<f64>()
        })
        .collect();
    let worst = tvs.iter().cloned().fold(0.0, f64::max);
    Outcome::new(
        worst <= 0.02,
        format!("max TV distance {worst:.4} over 5 probes (limit 0.02); per probe {tvs:.4?}"),
    )
}

fn c2_work_bound() -> Outcome {
    let mut worst = 0.0f64;
    let mut violations = 0;
    for k in [16usize, 256, 4096] {
        let bound = k as f64 * (k as f64).ln();
        for seed in 0..20 {
            let centers = random_centers(k, 8, seed * 7919 + k as u64);
            let work = build_fast(&centers, seed).unwrap().stats.work as f64;
            worst = worst.max(work / bound);
            if work > bound {
                violations += 1;
            }
        }
    }
    Outcome::new(
        violations == 0,
        format!("{violations} violations in 60 trees; max work / (k ln k) = {worst:.3}"),
    )
}

/// The 50 random k-means instances shared by criteria 3 to 6.
struct Suite {
    cases: Vec<SuiteCase>,
}

struct SuiteCase {
    data: Dataset,
    centers: CenterSet,
    reference: f64,
    sweep: TreeBuild,
    random: TreeBuild,
}

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let cases = (0..50u64)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(1000 + i);
                let k = rng.random_range(2..=20);
                let d = rng.random_range(1..=6);
                let n = rng.random_range((5 * k).max(50)..=500);
                let spread = rng.random_range(0.5..3.0);
                let b = gen_blobs(k, d, n, spread, i).unwrap();
                let reference = nearest_center_cost(&b.data, &b.centers, Objective::KMeans)
                    .unwrap()
                    .total_cost;
                let build = |m| {
                    build_threshold_tree_seeded(Some(&b.data), &b.centers, m, Objective::KMeans, i)
                        .unwrap()
                };
                SuiteCase {
                    sweep: build(KMeansMethod::Sweep),
                    random: build(KMeansMethod::Random),
                    data: b.data,
                    centers: b.centers,
                    reference,
                }
            })
            .collect();
        Suite { cases }
    })
}

fn c3_mistake_ratio() -> Outcome {
    let (mut nodes, mut violations, mut worst) = (0, 0, 0.0f64);
    for case in &suite().cases {
        let k = case.centers.len();
        for rec in case.sweep.tree.audit() {
            nodes += 1;
            let ratio = rec.mistakes.unwrap() as f64 / rec.balance() as f64;
            let bound = mistake_ratio_bound(k, rec.correct_cost.unwrap(), rec.squared_diameter);
            if ratio > 0.0 {
                worst = worst.max(ratio / bound);
            }
            if ratio > bound * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    Outcome::new(
        violations == 0,
        format!(
            "{violations} violations over {nodes} sweep splits; max (E/f) / bound = {worst:.4}"
        ),
    )
}

fn c4_margin_measure() -> Outcome {
    let (mut nodes, mut violations, mut least, mut mismatches) = (0, 0, f64::INFINITY, 0);
    for case in &suite().cases {
        let tree = &case.random.tree;
        let k = case.centers.len();
        let reaching = tree.centers_reaching(&case.centers);
        for (id, node) in tree.nodes().iter().enumerate() {
            if let Node::Split { .. } = node {
                nodes += 1;
                let m = MarginIntervals::for_node(&case.centers, &reaching[id], k).measure();
                least = least.min(m);
                if m < 1.0 / 3.0 {
                    violations += 1;
                }
                let recorded = tree
                    .audit()
                    .iter()
                    .find(|r| r.node.0 == id)
                    .and_then(|r| r.margin_measure);
                if recorded != Some(m) {
                    mismatches += 1;
                }
            }
        }
    }
    Outcome::new(
        violations == 0 && mismatches == 0,
        format!(
            "{violations} violations over {nodes} random splits; min measure {least:.4}; \
             {mismatches} audit mismatches"
        ),
    )
}

fn c5_cost_accounting() -> Outcome {
    let (mut trees, mut violations, mut worst) = (0, 0, 0.0f64);
    for case in &suite().cases {
        for build in [&case.sweep, &case.random] {
            trees += 1;
            let cost = tree_cost(&build.tree, &case.data, &case.centers, Objective::KMeans)
                .unwrap()
                .total_cost;
            let bound = misclassification_cost_bound(&build.tree, case.reference).unwrap();
            worst = worst.max(cost / bound);
            if cost > bound * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    Outcome::new(
        violations == 0,
        format!("{violations} violations over {trees} trees; max cost / bound = {worst:.4}"),
    )
}

fn c6_path_balance() -> Outcome {
    let (mut points, mut violations, mut worst) = (0, 0, 0.0f64);
    for case in &suite().cases {
        let k = case.centers.len();
        for build in [&case.sweep, &case.random] {
            for &s in &build.stats.path_balance {
                points += 1;
                worst = worst.max(s as f64 / k as f64);
                if s > k {
                    violations += 1;
                }
            }
        }
    }
    Outcome::new(
        violations == 0 && points > 0,
        format!("{violations} violations over {points} point paths; max sum / k = {worst:.3}"),
    )
}

fn c7_imm_separation() -> Outcome {
    let b = gen_imm_adversarial(10).unwrap();
    let imm = build_threshold_tree_seeded(
        Some(&b.data),
        &b.centers,
        KMeansMethod::Imm,
        Objective::KMedians,
        0,
    )
    .unwrap();
    let imm_ratio = kmedians_ratio(&imm.tree, &b.data, &b.centers);
    let random: Vec<f64> = (0..100)
        .map(|s| {
            kmedians_ratio(
                &build_fast(&b.centers, s).unwrap().tree,
                &b.data,
                &b.centers,
            )
        })
        .collect();
    let mean = random.iter().sum::<f64>() / random.len() as f64;
    Outcome::new(
        imm_ratio >= 2.5 && mean <= imm_ratio / 2.0,
        format!(
            "IMM ratio {imm_ratio:.4} (needs >= 2.5); median-random mean ratio {mean:.4} \
             over 100 seeds (needs <= {:.4})",
            imm_ratio / 2.0
        ),
    )
}

fn c8_two_means() -> Outcome {
    let mut mismatches = 0;
    let mut worst = 0.0f64;
    for i in 0..25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + i);
        let rows: Vec<Vec<f64>> = (0..12)
            .map(|_| (0..3).map(|_| rng.random_range(0.0..10.0)).collect())
            .collect();
        let data = Dataset::new(rows).unwrap();
        let centers = solve_reference(&data, 2, Objective::KMeans, i).unwrap();
        let exact = exact_2means_tree(&data, &centers, TwoMeansVariant::FixedCenters).unwrap();
        let oracle = tree_opt(&data, &centers, Objective::KMeans).unwrap();
        if exact.cost.to_bits() != oracle.to_bits() {
            mismatches += 1;
        }
        let nearest = nearest_center_cost(&data, &centers, Objective::KMeans)
            .unwrap()
            .total_cost;
        worst = worst.max(exact.cost / nearest);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = 0;
    for trial in 0..1_000_000 {
        let n = rng.random_range(1..=8);
        let r: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..10.0)).collect();
        let a: Vec<f64> = if trial % 2 == 0 {
            (0..n).map(|_| rng.random::<f64>()).collect()
        } else {
            (0..n).map(|_| rng.random_range(-5.0..5.0)).collect()
        };
        if !algebraic_lemma_check(&r, &a) {
            failures += 1;
        }
    }
    Outcome::new(
        mismatches == 0 && worst <= 3.02 && failures == 0,
        format!(
            "(a) {mismatches}/25 sweep-vs-oracle mismatches; (b) max cost / nearest {worst:.4} \
             (limit 3.02); (c) {failures} failures in 1e6 inequality trials"
        ),
    )
}

fn c9_kmeans_lower_bound() -> Outcome {
    let b = gen_kmeans_lb(20, 48, 0).unwrap();
    let splits = admissible_first_splits(&b);
    let harmless = splits.iter().filter(|s| s.separated_points == 0).count();
    let mut detail = format!(
        "{harmless}/{} admissible first splits separate nothing",
        splits.len()
    );
    let mut ok = harmless == 0 && !splits.is_empty();
    let mut excess: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for k in [10usize, 20, 40] {
        let b = gen_kmeans_lb(k, 48, 0).unwrap();
        let planted = b.planted_kmeans_cost.unwrap();
        let cost = |tree: &xclust::ThresholdTree| {
            tree_cost(tree, &b.data, &b.centers, Objective::KMeans)
                .unwrap()
                .total_cost
        };
        let sweep = build_threshold_tree_seeded(
            Some(&b.data),
            &b.centers,
            KMeansMethod::Sweep,
            Objective::KMeans,
            0,
        )
        .unwrap();
        let sweep_ratio = cost(&sweep.tree) / planted;
        let random_ratio = (0..10)
            .map(|s| {
                let t = build_threshold_tree_seeded(
                    None,
                    &b.centers,
                    KMeansMethod::Random,
                    Objective::KMeans,
                    s,
                )
                .unwrap();
                cost(&t.tree) / planted
            })
            .sum::<f64>()
            / 10.0;
        for (name, ratio) in [("mean-sweep", sweep_ratio), ("mean-random", random_ratio)] {
            let c = (ratio - 1.0) / k as f64;
            ok &= c > 0.05;
            excess.entry(name).or_default().push(ratio - 1.0);
            detail.push_str(&format!("; k={k} {name} ratio {ratio:.3} c={c:.4}"));
        }
    }
    for (name, e) in &excess {
        let monotone = e.windows(2).all(|w| w[1] > w[0]);
        ok &= monotone;
        if !monotone {
            detail.push_str(&format!("; {name} c*k not increasing"));
        }
    }
    Outcome::new(ok, detail)
}

fn c10_kmedians_lower_bound() -> Outcome {
    let (k, d) = (64, 60);
    let b = gen_kmedians_lb_with_dim(k, d, 0).unwrap();
    let mut min_diff = usize::MAX;
    for i in 0..k {
        for j in i + 1..k {
            let diff = (0..d)
                .filter(|&r| b.centers.coord(i, r) != b.centers.coord(j, r))
                .count();
            min_diff = min_diff.min(diff);
        }
    }
    let required = min_differing_coordinates(d);
    let ratios: Vec<f64> = (0..50)
        .map(|s| {
            kmedians_ratio(
                &build_fast(&b.centers, s).unwrap().tree,
                &b.data,
                &b.centers,
            )
        })
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bound_failures = 0;
    for _ in 0..100 {
        let parts = rng.random_range(1..=k);
        let labels: Vec<usize> = (0..b.n()).map(|_| rng.random_range(0..parts)).collect();
        if !partition_median_bound(&b.data, &labels).unwrap().holds() {
            bound_failures += 1;
        }
    }
    Outcome::new(
        min_diff >= required && mean >= 1.5 && bound_failures == 0,
        format!(
            "min differing coordinates {min_diff} (needs >= {required}); median-random mean \
             ratio {mean:.4} over 50 seeds (needs >= 1.5); {bound_failures}/100 partitions \
             violate the quarter-sum bound"
        ),
    )
}

fn min_time(reps: usize, mut f: impl FnMut()) -> f64 {
    (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn c11_runtime_scaling() -> Outcome {
    let fast_small = random_centers(1 << 10, 32, 1);
    let fast_large = random_centers(1 << 14, 32, 2);
    let t_small = min_time(9, || {
        build_fast(&fast_small, 3).unwrap();
    });
    let t_large = min_time(5, || {
        build_fast(&fast_large, 3).unwrap();
    });
    let fast_ratio = t_large / t_small;
    let fast_limit = 16f64.powf(1.2);

    let mean_small = random_centers(1 << 7, 32, 3);
    let mean_large = random_centers(1 << 9, 32, 4);
    let random_build = |c: &CenterSet| {
        build_threshold_tree_seeded(None, c, KMeansMethod::Random, Objective::KMeans, 5).unwrap();
    };
    let m_small = min_time(9, || random_build(&mean_small));
    let m_large = min_time(5, || random_build(&mean_large));
    let mean_ratio = m_large / m_small;
    let mean_limit = 4f64.powf(2.3);
    Outcome::new(
        fast_ratio <= fast_limit && mean_ratio <= mean_limit,
        format!(
            "median-random 2^10 -> 2^14: {t_small:.4}s -> {t_large:.4}s, ratio {fast_ratio:.2} \
             (limit {fast_limit:.2}); mean-random 2^7 -> 2^9: {m_small:.4}s -> {m_large:.4}s, \
             ratio {mean_ratio:.2} (limit {mean_limit:.2})"
        ),
    )
}

fn run_cli(args: &[String]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_xclust"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "{args:?} exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

fn round_trip(
    dir: &Path,
    objective: ObjectiveArg,
    method: Method,
    variant: Option<Variant>,
) -> Result<(), String> {
    let tag = format!("{}-{}-{:?}", objective.name(), method.name(), variant);
    let points = dir.join(format!("{tag}-p.csv"));
    let centers = dir.join(format!("{tag}-c.csv"));
    let tree_path = dir.join(format!("{tag}-t.json"));
    let leaf_centers = dir.join(format!("{tag}-lc.csv"));
    let report_a = dir.join(format!("{tag}-ra.json"));
    let report_b = dir.join(format!("{tag}-rb.json"));
    let str_args = |v: &[&str]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>();

    let gen = match (objective, method) {
        (ObjectiveArg::Kmedians, _) => str_args(&["--instance", "imm-adversarial", "--k", "5"]),
        (ObjectiveArg::TwoMeans, _) => str_args(&[
            "--instance",
            "blobs",
            "--k",
            "2",
            "--d",
            "3",
            "--n",
            "80",
            "--spread",
            "2",
            "--seed",
            "7",
        ]),
        _ => str_args(&[
            "--instance",
            "blobs",
            "--k",
            "6",
            "--d",
            "4",
            "--n",
            "300",
            "--spread",
            "1.5",
            "--seed",
            "7",
        ]),
    };
    let mut args = str_args(&["gen"]);
    args.extend(gen);
    args.extend([
        "--out-points".into(),
        s(&points),
        "--out-centers".into(),
        s(&centers),
    ]);
    run_cli(&args)?;

    let mut args = str_args(&[
        "cluster",
        "--objective",
        objective.name(),
        "--method",
        method.name(),
        "--seed",
        "11",
    ]);
    args.extend([
        "--points".into(),
        s(&points),
        "--centers".into(),
        s(&centers),
        "--out-tree".into(),
        s(&tree_path),
        "--out-centers".into(),
        s(&leaf_centers),
    ]);
    if let Some(v) = variant {
        args.extend(["--variant".into(), format!("{v:?}").to_lowercase()]);
    }
    run_cli(&args)?;

    for report in [&report_a, &report_b] {
        run_cli(&[
            "eval".into(),
            "--tree".into(),
            s(&tree_path),
            "--points".into(),
            s(&points),
            "--centers".into(),
            s(&leaf_centers),
            "--objective".into(),
            objective.name().into(),
            "--out-report".into(),
            s(report),
        ])?;
    }

    let reloaded = read_tree(&tree_path).map_err(|e| e.to_string())?;
    let data = read_points(&points).map_err(|e| e.to_string())?;
    let written_centers = read_centers(&leaf_centers).map_err(|e| e.to_string())?;
    let build_args = BuildArgs {
        objective,
        points: Some(points.clone()),
        centers: Some(centers.clone()),
        fit_k: None,
        seed: 11,
        variant,
        domain: None,
    };
    let inputs =
        load_inputs(&build_args, PointsUse::for_method(method)).map_err(|e| e.to_string())?;
    let built = build_tree(method, &inputs, &build_args, 11).map_err(|e| e.to_string())?;
    if built.tree != reloaded {
        return Err(format!(
            "{tag}: reloaded tree differs from the in-memory build"
        ));
    }
    if built.centers != written_centers {
        return Err(format!(
            "{tag}: written centers differ from the in-memory build"
        ));
    }
    let before = tree_cost(&built.tree, &data, &built.centers, objective.objective())
        .unwrap()
        .total_cost;
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_a).unwrap())
            .map_err(|e| e.to_string())?;
    for key in [
        "objective",
        "reference",
        "tree_cost",
        "reference_cost",
        "ratio",
        "n",
        "k",
        "d",
        "height",
    ] {
        if report.get(key).is_none() {
            return Err(format!("{tag}: report lacks {key}"));
        }
    }
    let after = report["tree_cost"].as_f64().unwrap();
    if before.to_bits() != after.to_bits() {
        return Err(format!(
            "{tag}: cost {before} before serialization, {after} after"
        ));
    }
    if std::fs::read(&report_a).unwrap() != std::fs::read(&report_b).unwrap() {
        return Err(format!("{tag}: repeated evaluation is not byte-identical"));
    }
    Ok(())
}

fn c12_cli_round_trips() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let pairs = [
        (ObjectiveArg::Kmedians, Method::MedianRandom, None),
        (ObjectiveArg::Kmedians, Method::MedianSimplified, None),
        (ObjectiveArg::Kmedians, Method::Imm, None),
        (ObjectiveArg::Kmeans, Method::MeanSweep, None),
        (ObjectiveArg::Kmeans, Method::MeanRandom, None),
        (ObjectiveArg::Kmeans, Method::Imm, None),
        (
            ObjectiveArg::TwoMeans,
            Method::TwoMeansExact,
            Some(Variant::Fixed),
        ),
        (
            ObjectiveArg::TwoMeans,
            Method::TwoMeansExact,
            Some(Variant::Refit),
        ),
    ];
    let errors: Vec<String> = pairs
        .iter()
        .filter_map(|&(o, m, v)| round_trip(dir.path(), o, m, v).err())
        .collect();
    Outcome::new(
        errors.is_empty(),
        if errors.is_empty() {
            format!(
                "{} objective/method pipelines round-trip exactly",
                pairs.len()
            )
        } else {
            errors.join("; ")
        },
    )
}

type Criterion = (u32, &'static str, u64, fn() -> Outcome);

const CRITERIA: [Criterion; 12] = [
    (
        1,
        "median builders agree in distribution",
        120,
        c1_distribution_equivalence,
    ),
    (2, "median-random work within k ln k", 60, c2_work_bound),
    (
        3,
        "sweep mistakes within 15 ln k bound",
        120,
        c3_mistake_ratio,
    ),
    (4, "margin measure at least 1/3", 60, c4_margin_measure),
    (
        5,
        "k-means cost within mistake accounting",
        60,
        c5_cost_accounting,
    ),
    (6, "per-point balance sums at most k", 60, c6_path_balance),
    (
        7,
        "IMM vs median-random on the adversarial instance",
        60,
        c7_imm_separation,
    ),
    (8, "2-means sweep exact and within 3x", 180, c8_two_means),
    (
        9,
        "k-means lower-bound instance",
        120,
        c9_kmeans_lower_bound,
    ),
    (
        10,
        "k-medians lower-bound instance",
        120,
        c10_kmedians_lower_bound,
    ),
    (11, "runtime scaling", 300, c11_runtime_scaling),
    (12, "CLI round trips", 120, c12_cli_round_trips),
];

fn main() {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (id, name, limit, run) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome =
            std::panic::catch_unwind(run).unwrap_or_else(|_| Outcome::new(false, "panicked"));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = outcome.pass && in_time;
        println!(
            "criterion {id:>2} [PRIMARY] {name}: {} ({}; {:.1}s of {limit}s)",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
