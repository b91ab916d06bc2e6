//! Clustering costs of tree assignments and nearest-center assignments.

use crate::error::Result;
use crate::geometry::{ensure_dim, CenterSet, Dataset, Objective};
use crate::tree::ThresholdTree;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCost {
    pub index: usize,
    pub center: usize,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub objective: Objective,
    /// Sum of per-point costs, or their maximum for k-center.
    pub total_cost: f64,
    pub per_point: Vec<PointCost>,
    pub reference_cost: Option<f64>,
    pub ratio: Option<f64>,
}

impl CostReport {
    pub fn from_points(objective: Objective, per_point: Vec<PointCost>) -> Self {
        let total_cost = match objective {
            Objective::KCenter => per_point.iter().fold(0.0, |m, p| f64::max(m, p.cost)),
            _ => per_point.iter().map(|p| p.cost).sum(),
        };
        Self {
            objective,
            total_cost,
            per_point,
            reference_cost: None,
            ratio: None,
        }
    }

    /// Attaches a reference cost. A zero reference gives ratio 1 when the
    /// total is also zero and infinity otherwise.
    pub fn with_reference(mut self, reference: f64) -> Self {
        self.reference_cost = Some(reference);
        self.ratio = Some(if reference > 0.0 {
            self.total_cost / reference
        } else if self.total_cost == 0.0 {
            1.0
        } else {
            f64::INFINITY
        });
        self
    }

    pub fn assignments(&self) -> Vec<usize> {
        self.per_point.iter().map(|p| p.center).collect()
    }
}

fn check_dims(data: &Dataset, centers: &CenterSet) -> Result<()> {
    ensure_dim(centers.dim(), data.dim())
}

/// Cost of assigning every point to the center of the leaf it reaches.
/// Runs in `O(n (d + height))`.
pub fn tree_cost(
    tree: &ThresholdTree,
    data: &Dataset,
    centers: &CenterSet,
    objective: Objective,
) -> Result<CostReport> {
    check_dims(data, centers)?;
    ensure_dim(tree.dim(), data.dim())?;
    if centers.len() != tree.k() {
        return Err(crate::Error::MalformedTree(format!(
            "tree has {} leaves but {} centers were supplied",
            tree.k(),
            centers.len()
        )));
    }
    let per_point = data
        .iter()
        .enumerate()
        .map(|(index, x)| {
            let center = tree.assign_unchecked(x);
            PointCost {
                index,
                center,
                cost: objective.point_cost(x, centers.get(center)),
            }
        })
        .collect();
    Ok(CostReport::from_points(objective, per_point))
}

/// Cost of the unconstrained assignment of every point to its nearest center
/// (l1 for k-medians, l2 otherwise; ties to the lowest index).
pub fn nearest_center_cost(
    data: &Dataset,
    centers: &CenterSet,
    objective: Objective,
) -> Result<CostReport> {
    check_dims(data, centers)?;
    let per_point = data
        .iter()
        .enumerate()
        .map(|(index, x)| {
            let (center, cost) = objective.nearest(x, centers);
            PointCost {
                index,
                center,
                cost,
            }
        })
        .collect();
    Ok(CostReport::from_points(objective, per_point))
}

/// Median of a coordinate list; the midpoint of the two middle values for even
/// lengths. Reorders `values`.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty list");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Optimal center of a point group: the centroid for k-means, the
/// coordinate-wise median for k-medians. k-center has no closed form and
/// falls back to the centroid.
pub fn optimal_center(data: &Dataset, members: &[usize], objective: Objective) -> Vec<f64> {
    let d = data.dim();
    match objective {
        Objective::KMedians => {
            let mut column = Vec::with_capacity(members.len());
            (0..d)
                .map(|r| {
                    column.clear();
                    column.extend(members.iter().map(|&i| data.coord(i, r)));
                    median(&mut column)
                })
                .collect()
        }
        Objective::KMeans | Objective::KCenter => {
            let mut sum = vec![0.0; d];
            for &i in members {
                for (s, v) in sum.iter_mut().zip(data.get(i)) {
                    *s += v;
                }
            }
            let m = members.len() as f64;
            sum.into_iter().map(|s| s / m).collect()
        }
    }
}

/// Tree cost after replacing each non-empty leaf's center by the optimal
/// center of the points that reach it. For k-center the given centers are kept.
pub fn refit_tree_cost(
    tree: &ThresholdTree,
    data: &Dataset,
    centers: &CenterSet,
    objective: Objective,
) -> Result<CostReport> {
    let fixed = tree_cost(tree, data, centers, objective)?;
    if objective == Objective::KCenter {
        return Ok(fixed);
    }
    let mut groups = vec![Vec::new(); centers.len()];
    for p in &fixed.per_point {
        groups[p.center].push(p.index);
    }
    let refit: Vec<Option<Vec<f64>>> = groups
        .iter()
        .map(|g| (!g.is_empty()).then(|| optimal_center(data, g, objective)))
        .collect();
    let per_point = fixed
        .per_point
        .iter()
        .map(|p| PointCost {
            cost: objective.point_cost(
                data.get(p.index),
                refit[p.center].as_deref().expect("group is non-empty"),
            ),
            ..*p
        })
        .collect();
    Ok(CostReport::from_points(objective, per_point))
}
