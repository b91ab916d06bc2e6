use std::collections::HashMap;

use crate::cost::optimal_center;
use crate::error::{Error, Result};
use crate::geometry::{ensure_dim, CenterSet, Dataset, Objective};
use crate::tree::{Node, ThresholdTree, TreeAssembler};

pub const PARTITION_OPT_MAX_POINTS: usize = 14;
pub const TREE_OPT_MAX_CENTERS: usize = 5;
pub const TREE_OPT_MAX_COORDS: usize = 12;
const TREE_OPT_MAX_POINTS: usize = 128;
const PARTITION_OPT_MAX_LABELINGS: u128 = 50_000_000;

#[derive(Debug, Clone, Copy)]
pub enum OracleMode<'a> {
    /// Best clustering into at most `k` groups, each at its optimal center.
    PartitionOpt { k: usize },
    /// Best threshold tree for the given centers.
    TreeOpt { centers: &'a CenterSet },
}

pub fn brute_force_oracle(
    data: &Dataset,
    objective: Objective,
    mode: OracleMode<'_>,
) -> Result<f64> {
    match mode {
        OracleMode::PartitionOpt { k } => partition_opt(data, k, objective),
        OracleMode::TreeOpt { centers } => tree_opt(data, centers, objective),
    }
}

fn combine(objective: Objective, a: f64, b: f64) -> f64 {
    match objective {
        Objective::KCenter => a.max(b),
        _ => a + b,
    }
}

fn group_cost(data: &Dataset, members: &[usize], center: &[f64], objective: Objective) -> f64 {
    members
        .iter()
        .map(|&i| objective.point_cost(data.get(i), center))
        .fold(0.0, |acc, c| combine(objective, acc, c))
}

/// Number of partitions of `n` items into at most `k` non-empty blocks.
fn partitions_up_to(n: usize, k: usize) -> u128 {
    // Stirling numbers of the second kind, row by row.
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; k + 1];
        for j in 1..=k {
            next[j] = (j as u128)
                .saturating_mul(row[j])
                .saturating_add(row[j - 1]);
        }
        row = next;
    }
    row[1..].iter().fold(0u128, |a, &b| a.saturating_add(b))
}

/// Exhaustive minimum over partitions into at most `k` groups, each charged
/// at its optimal center (centroid for k-means, coordinate-wise median for
/// k-medians, centroid for k-center).
pub fn partition_opt(data: &Dataset, k: usize, objective: Objective) -> Result<f64> {
    let n = data.len();
    if n > PARTITION_OPT_MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "partition oracle handles at most {PARTITION_OPT_MAX_POINTS} points, got {n}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let k = k.min(n);
    let count = partitions_up_to(n, k);
    if count > PARTITION_OPT_MAX_LABELINGS {
        return Err(Error::TooLarge(format!(
            "{count} partitions exceed the enumeration cap"
        )));
    }
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    // Restricted growth strings: labels[i] <= max(labels[..i]) + 1.
    #[allow(clippy::too_many_arguments)]
    fn visit(
        i: usize,
        used: usize,
        labels: &mut [usize],
        groups: &mut Vec<Vec<usize>>,
        data: &Dataset,
        k: usize,
        objective: Objective,
        best: &mut f64,
    ) {
        if i == labels.len() {
            for g in groups.iter_mut() {
                g.clear();
            }
            for (p, &l) in labels.iter().enumerate() {
                groups[l].push(p);
            }
            let cost = groups[..used]
                .iter()
                .map(|g| group_cost(data, g, &optimal_center(data, g, objective), objective))
                .fold(0.0, |a, c| combine(objective, a, c));
            if cost < *best {
                *best = cost;
            }
            return;
        }
        for l in 0..(used + 1).min(k) {
            labels[i] = l;
            visit(
                i + 1,
                used.max(l + 1),
                labels,
                groups,
                data,
                k,
                objective,
                best,
            );
        }
    }
    visit(
        0,
        0,
        &mut labels,
        &mut groups,
        data,
        k,
        objective,
        &mut best,
    );
    Ok(best)
}

/// Optimal threshold tree for the given centers by exhaustive search,
/// charging every point to its leaf's center. Thresholds range over
/// midpoints of consecutive distinct coordinates of the node's centers and
/// the points reaching it, inside the node's center range.
pub fn tree_opt_tree(
    data: &Dataset,
    centers: &CenterSet,
    objective: Objective,
) -> Result<ThresholdTree> {
    ensure_dim(centers.dim(), data.dim())?;
    centers.ensure_distinct()?;
    let k = centers.len();
    if k > TREE_OPT_MAX_CENTERS {
        return Err(Error::TooLarge(format!(
            "tree oracle handles at most {TREE_OPT_MAX_CENTERS} centers, got {k}"
        )));
    }
    if data.len() > TREE_OPT_MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "tree oracle handles at most {TREE_OPT_MAX_POINTS} points, got {}",
            data.len()
        )));
    }
    for r in 0..centers.dim() {
        let mut col: Vec<f64> = centers.iter().map(|c| c[r]).collect();
        col.sort_by(f64::total_cmp);
        col.dedup();
        if col.len() > TREE_OPT_MAX_COORDS {
            return Err(Error::TooLarge(format!(
                "tree oracle handles at most {TREE_OPT_MAX_COORDS} distinct center coordinates per dimension"
            )));
        }
    }
    let mut search = TreeSearch {
        data,
        centers,
        objective,
        memo: HashMap::new(),
    };
    let all_points = if data.len() == 128 {
        u128::MAX
    } else {
        (1u128 << data.len()) - 1
    };
    let all_centers = (1u32 << k) - 1;
    search.best(all_centers, all_points);

    let mut asm = TreeAssembler::new(data.dim(), 2 * k - 1);
    let mut stack = vec![(asm.reserve(), all_centers, all_points)];
    while let Some((id, cm, pm)) = stack.pop() {
        match search.memo[&(cm, pm)].1 {
            None => asm.set(
                id,
                Node::Leaf {
                    center: cm.trailing_zeros() as usize,
                },
            ),
            Some(cut) => {
                let (left, right) = (asm.reserve(), asm.reserve());
                asm.set(
                    id,
                    Node::Split {
                        dim: cut.dim,
                        threshold: cut.threshold,
                        left,
                        right,
                    },
                );
                stack.push((left, cut.left_centers, cut.left_points));
                stack.push((right, cm & !cut.left_centers, pm & !cut.left_points));
            }
        }
    }
    asm.finish(k, Vec::new())
}

/// Minimum cost over threshold trees for the given centers; see
/// [`tree_opt_tree`]. The cost is summed in point order, like
/// [`tree_cost`](crate::cost::tree_cost).
pub fn tree_opt(data: &Dataset, centers: &CenterSet, objective: Objective) -> Result<f64> {
    let tree = tree_opt_tree(data, centers, objective)?;
    Ok(crate::cost::tree_cost(&tree, data, centers, objective)?.total_cost)
}

#[derive(Debug, Clone, Copy)]
struct Cut {
    dim: usize,
    threshold: f64,
    left_centers: u32,
    left_points: u128,
}

struct TreeSearch<'a> {
    data: &'a Dataset,
    centers: &'a CenterSet,
    objective: Objective,
    memo: HashMap<(u32, u128), (f64, Option<Cut>)>,
}

fn members(mask: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&i| mask >> i & 1 == 1)
}

impl TreeSearch<'_> {
    fn best(&mut self, cmask: u32, pmask: u128) -> f64 {
        if let Some(&(v, _)) = self.memo.get(&(cmask, pmask)) {
            return v;
        }
        let node: Vec<usize> = (0..self.centers.len())
            .filter(|&i| cmask >> i & 1 == 1)
            .collect();
        let points: Vec<usize> = members(pmask)
            .take_while(|&i| i < self.data.len())
            .collect();
        let value = if node.len() == 1 {
            (
                group_cost(
                    self.data,
                    &points,
                    self.centers.get(node[0]),
                    self.objective,
                ),
                None,
            )
        } else {
            let mut best = (f64::INFINITY, None);
            for r in 0..self.centers.dim() {
                let cc: Vec<f64> = node.iter().map(|&i| self.centers.coord(i, r)).collect();
                let a = cc.iter().copied().fold(f64::INFINITY, f64::min);
                let b = cc.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if a == b {
                    continue;
                }
                let mut values: Vec<f64> = cc
                    .iter()
                    .copied()
                    .chain(
                        points
                            .iter()
                            .map(|&p| self.data.coord(p, r))
                            .filter(|&v| a <= v && v <= b),
                    )
                    .collect();
                values.sort_by(f64::total_cmp);
                values.dedup();
                for w in values.windows(2) {
                    let mut t = w[0] + (w[1] - w[0]) / 2.0;
                    if t <= w[0] {
                        t = w[1];
                    }
                    let lc = node
                        .iter()
                        .filter(|&&i| self.centers.coord(i, r) < t)
                        .fold(0u32, |m, &i| m | 1 << i);
                    let rc = cmask & !lc;
                    if lc == 0 || rc == 0 {
                        continue;
                    }
                    let lp = points
                        .iter()
                        .filter(|&&p| self.data.coord(p, r) < t)
                        .fold(0u128, |m, &p| m | 1 << p);
                    let rp = pmask & !lp;
                    let v = combine(self.objective, self.best(lc, lp), self.best(rc, rp));
                    if v < best.0 {
                        best = (
                            v,
                            Some(Cut {
                                dim: r,
                                threshold: t,
                                left_centers: lc,
                                left_points: lp,
                            }),
                        );
                    }
                }
            }
            best
        };
        self.memo.insert((cmask, pmask), value);
        value.0
    }
}
