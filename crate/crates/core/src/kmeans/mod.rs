//! Explainable k-means.
//!
//! A node `u` holds the centers `M(u)` that reach it and the correctly
//! classified points `X^cor(u)`: points inside the node's region whose
//! nearest center is still in `M(u)`. A line's mistakes `E` are the points of
//! `X^cor(u)` it separates from their nearest center and its balance `f` is
//! the smaller of its two center counts. The deterministic sweep minimizes
//! `E / f`, the IMM baseline minimizes `E`, and the randomized splitter
//! samples `(r, t)` proportional to `R_r / f` over margin intervals that stay
//! away from every center coordinate.

mod margins;
mod sweep;

pub use margins::{
    margin_log, random_split, widest_gap_cut, MarginInterval, MarginIntervals, RandomCut,
};
pub use sweep::{imm_split, sweep_candidates, sweep_split, SplitCandidate};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{ensure_dim, BoundingBox, CenterSet, Dataset, Objective};
use crate::tree::{
    region_contains, BuildStats, Constraint, Node, NodeId, SplitRecord, ThresholdTree,
    TreeAssembler, TreeBuild,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KMeansMethod {
    Sweep,
    Random,
    Imm,
}

impl KMeansMethod {
    pub fn needs_data(self) -> bool {
        !matches!(self, KMeansMethod::Random)
    }
}

/// Index of the nearest center of every point under the objective's metric,
/// ties to the lowest index.
pub fn nearest_centers(
    data: &Dataset,
    centers: &CenterSet,
    objective: Objective,
) -> Result<Vec<usize>> {
    ensure_dim(centers.dim(), data.dim())?;
    Ok(data
        .iter()
        .map(|x| objective.nearest(x, centers).0)
        .collect())
}

/// `X^cor(u)` by definition: points inside the region cut out by `path` whose
/// nearest center is one of `node_centers`.
pub fn correctly_classified(
    path: &[Constraint],
    node_centers: &[usize],
    data: Option<&Dataset>,
    centers: &CenterSet,
    objective: Objective,
) -> Result<Vec<usize>> {
    let Some(data) = data else {
        return Ok(Vec::new());
    };
    let nearest = nearest_centers(data, centers, objective)?;
    let mut inside = vec![false; centers.len()];
    for &c in node_centers {
        inside[c] = true;
    }
    Ok((0..data.len())
        .filter(|&x| inside[nearest[x]] && region_contains(path, data.get(x)))
        .collect())
}

/// Upper bound on `E / f` guaranteed to be attainable at a node:
/// `15 ln k * correct_cost / squared_diameter`.
pub fn mistake_ratio_bound(k: usize, correct_cost: f64, squared_diameter: f64) -> f64 {
    15.0 * (k as f64).ln() * correct_cost / squared_diameter
}

/// `2 * reference_cost + 2 * sum_u E_u * C_2(u)` from a tree's audit, an upper
/// bound on the tree's k-means cost. `None` when mistakes were not recorded.
pub fn misclassification_cost_bound(tree: &ThresholdTree, reference_cost: f64) -> Option<f64> {
    let mut extra = 0.0;
    for rec in tree.audit() {
        extra += rec.mistakes? as f64 * rec.squared_diameter;
    }
    Some(2.0 * reference_cost + 2.0 * extra)
}

/// Seeded k-means tree under the squared Euclidean objective.
pub fn build_kmeans_tree(
    data: Option<&Dataset>,
    centers: &CenterSet,
    method: KMeansMethod,
    seed: u64,
) -> Result<TreeBuild> {
    build_threshold_tree_seeded(data, centers, method, Objective::KMeans, seed)
}

/// Seeded entry point for [`build_threshold_tree`].
pub fn build_threshold_tree_seeded(
    data: Option<&Dataset>,
    centers: &CenterSet,
    method: KMeansMethod,
    objective: Objective,
    seed: u64,
) -> Result<TreeBuild> {
    build_threshold_tree(
        data,
        centers,
        method,
        objective,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

struct Pending {
    id: NodeId,
    centers: Vec<usize>,
    cor: Vec<usize>,
}

/// Splits multi-center leaves until every leaf holds one center. `objective`
/// fixes the metric for nearest centers and the audit's `correct_cost`.
/// With data, every split records its mistakes and `stats.path_balance[x]`
/// sums the balance of each split at which `x` is correctly classified.
pub fn build_threshold_tree<R: Rng + ?Sized>(
    data: Option<&Dataset>,
    centers: &CenterSet,
    method: KMeansMethod,
    objective: Objective,
    rng: &mut R,
) -> Result<TreeBuild> {
    centers.ensure_distinct()?;
    if method.needs_data() && data.is_none() {
        return Err(Error::InvalidArgument(
            "the sweep and IMM splitters need a dataset".into(),
        ));
    }
    let k = centers.len();
    let d = centers.dim();
    let nearest = match data {
        Some(data) => nearest_centers(data, centers, objective)?,
        None => Vec::new(),
    };
    let n = nearest.len();

    // Global per-dimension center orders, filtered per node in O(k).
    let orders: Vec<Vec<usize>> = if method == KMeansMethod::Random {
        (0..d)
            .map(|r| {
                let mut o: Vec<usize> = (0..k).collect();
                o.sort_by(|&a, &b| {
                    centers
                        .coord(a, r)
                        .total_cmp(&centers.coord(b, r))
                        .then(a.cmp(&b))
                });
                o
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut stamp = vec![usize::MAX; k];

    let mut asm = TreeAssembler::new(d, 2 * k - 1);
    let mut stats = BuildStats {
        path_balance: vec![0; n],
        ..BuildStats::default()
    };
    let mut audit = Vec::with_capacity(k - 1);
    let root = asm.reserve();
    let mut stack = vec![Pending {
        id: root,
        centers: (0..k).collect(),
        cor: (0..n).collect(),
    }];

    while let Some(node) = stack.pop() {
        if node.centers.len() == 1 {
            asm.set(
                node.id,
                Node::Leaf {
                    center: node.centers[0],
                },
            );
            continue;
        }
        let bbox = BoundingBox::of_centers(centers, &node.centers)?;
        let (dim, threshold, margin_measure) = match method {
            KMeansMethod::Sweep => {
                let s = sweep_split(&node.centers, &node.cor, data, centers, &nearest)?;
                (s.dim, s.threshold, None)
            }
            KMeansMethod::Imm => {
                let s = imm_split(&node.centers, &node.cor, data, centers, &nearest)?;
                (s.dim, s.threshold, None)
            }
            KMeansMethod::Random => {
                for &c in &node.centers {
                    stamp[c] = node.id.0;
                }
                let columns: Vec<Vec<f64>> = orders
                    .iter()
                    .enumerate()
                    .map(|(r, o)| {
                        o.iter()
                            .filter(|&&c| stamp[c] == node.id.0)
                            .map(|&c| centers.coord(c, r))
                            .collect()
                    })
                    .collect();
                let intervals = MarginIntervals::from_sorted_columns(&columns, k);
                stats.samples += 1;
                let cut = match intervals.sample(rng) {
                    Some(cut) => cut,
                    None => widest_gap_cut(&columns).ok_or_else(|| {
                        Error::InvalidArgument("node has no admissible threshold".into())
                    })?,
                };
                (cut.dim, cut.threshold, Some(intervals.measure()))
            }
        };

        let (lc, rc): (Vec<usize>, Vec<usize>) = node
            .centers
            .iter()
            .partition(|&&c| centers.coord(c, dim) < threshold);
        if lc.is_empty() || rc.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "split x{dim} < {threshold} leaves one side without centers"
            )));
        }
        let balance = lc.len().min(rc.len());

        let mut mistakes = 0;
        let mut correct_cost = 0.0;
        let (mut lp, mut rp) = (Vec::new(), Vec::new());
        if let Some(data) = data {
            for &x in &node.cor {
                let p = data.get(x);
                let c = nearest[x];
                correct_cost += objective.point_cost(p, centers.get(c));
                stats.path_balance[x] += balance;
                let point_left = p[dim] < threshold;
                if point_left != (centers.coord(c, dim) < threshold) {
                    mistakes += 1;
                } else if point_left {
                    lp.push(x);
                } else {
                    rp.push(x);
                }
            }
        }

        let left = asm.reserve();
        let right = asm.reserve();
        asm.set(
            node.id,
            Node::Split {
                dim,
                threshold,
                left,
                right,
            },
        );
        stats.splits += 1;
        stats.work += balance;
        audit.push(SplitRecord {
            node: node.id,
            dim,
            threshold,
            left_centers: lc.len(),
            right_centers: rc.len(),
            squared_diameter: bbox.squared_diameter(),
            mistakes: data.map(|_| mistakes),
            correct_points: data.map(|_| node.cor.len()),
            correct_cost: data.map(|_| correct_cost),
            margin_measure,
        });
        stack.push(Pending {
            id: right,
            centers: rc,
            cor: rp,
        });
        stack.push(Pending {
            id: left,
            centers: lc,
            cor: lp,
        });
    }

    let tree = asm.finish(k, audit)?;
    debug_assert!(k > 256 || tree.validate_against(centers).is_ok());
    Ok(TreeBuild { tree, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{nearest_center_cost, tree_cost};
    use rand::Rng;

    fn random_instance(rng: &mut ChaCha8Rng, k: usize, d: usize, n: usize) -> (Dataset, CenterSet) {
        let means: Vec<Vec<f64>> = (0..k)
            .map(|_| (0..d).map(|_| rng.random_range(0.0..10.0)).collect())
            .collect();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|j| {
                means[j % k]
                    .iter()
                    .map(|m| m + rng.random_range(-1.5..1.5))
                    .collect()
            })
            .collect();
        (Dataset::new(rows).unwrap(), CenterSet::new(means).unwrap())
    }

    #[test]
    fn single_center_and_pair() {
        let centers = CenterSet::new(vec![vec![1.0, 2.0]]).unwrap();
        let b = build_kmeans_tree(None, &centers, KMeansMethod::Random, 0).unwrap();
        assert_eq!(b.tree.nodes(), &[Node::Leaf { center: 0 }]);
        let centers = CenterSet::new(vec![vec![0.0, 5.0], vec![3.0, 5.0]]).unwrap();
        let data = Dataset::new(vec![vec![1.0, 5.0], vec![2.5, 4.0]]).unwrap();
        for m in [KMeansMethod::Sweep, KMeansMethod::Random, KMeansMethod::Imm] {
            let b = build_kmeans_tree(Some(&data), &centers, m, 4).unwrap();
            let rec = &b.tree.audit()[0];
            assert_eq!(rec.dim, 0);
            assert!(0.0 < rec.threshold && rec.threshold < 3.0);
        }
    }

    #[test]
    fn sweep_requires_data() {
        let centers = CenterSet::new(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(build_kmeans_tree(None, &centers, KMeansMethod::Sweep, 0).is_err());
    }

    #[test]
    fn incremental_correct_sets_match_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let (data, centers) = random_instance(&mut rng, 6, 3, 120);
            for method in [KMeansMethod::Sweep, KMeansMethod::Imm, KMeansMethod::Random] {
                let b = build_kmeans_tree(Some(&data), &centers, method, 1).unwrap();
                let reach = b.tree.centers_reaching(&centers);
                for rec in b.tree.audit() {
                    let path = b.tree.path_to(rec.node);
                    let cor = correctly_classified(
                        &path,
                        &reach[rec.node.0],
                        Some(&data),
                        &centers,
                        Objective::KMeans,
                    )
                    .unwrap();
                    assert_eq!(rec.correct_points, Some(cor.len()));
                }
            }
        }
    }

    #[test]
    fn certificates_hold_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let k = rng.random_range(2..12);
            let (data, centers) = random_instance(&mut rng, k, 3, 200);
            let reference = nearest_center_cost(&data, &centers, Objective::KMeans)
                .unwrap()
                .total_cost;
            for method in [KMeansMethod::Sweep, KMeansMethod::Random, KMeansMethod::Imm] {
                let b = build_kmeans_tree(Some(&data), &centers, method, 2).unwrap();
                let cost = tree_cost(&b.tree, &data, &centers, Objective::KMeans)
                    .unwrap()
                    .total_cost;
                let bound = misclassification_cost_bound(&b.tree, reference).unwrap();
                assert!(cost <= bound * (1.0 + 1e-9), "{method:?}: {cost} > {bound}");
                assert!(b.stats.path_balance.iter().all(|&s| s <= k));
                for rec in b.tree.audit() {
                    if method == KMeansMethod::Sweep {
                        let ratio = rec.mistakes.unwrap() as f64 / rec.balance() as f64;
                        let rhs =
                            mistake_ratio_bound(k, rec.correct_cost.unwrap(), rec.squared_diameter);
                        assert!(ratio <= rhs * (1.0 + 1e-9));
                    }
                    if method == KMeansMethod::Random {
                        assert!(rec.margin_measure.unwrap() >= 1.0 / 3.0);
                    }
                }
            }
        }
    }

    #[test]
    fn deterministic_methods_ignore_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (data, centers) = random_instance(&mut rng, 7, 4, 90);
        for m in [KMeansMethod::Sweep, KMeansMethod::Imm] {
            assert_eq!(
                build_kmeans_tree(Some(&data), &centers, m, 1).unwrap(),
                build_kmeans_tree(Some(&data), &centers, m, 2).unwrap()
            );
        }
        let a = build_kmeans_tree(None, &centers, KMeansMethod::Random, 3).unwrap();
        assert_eq!(
            a,
            build_kmeans_tree(None, &centers, KMeansMethod::Random, 3).unwrap()
        );
    }
}
