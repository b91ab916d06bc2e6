//! Test and benchmark instances: the hypercube k-medians construction, the
//! permutation k-means construction, the IMM-adversarial instance, Gaussian
//! blobs, a reference (non-explainable) solver and brute-force oracles.

mod adversarial;
mod oracle;
mod reference;

pub use adversarial::{
    admissible_first_splits, gen_imm_adversarial, gen_kmeans_lb, gen_kmeans_lb_default,
    gen_kmedians_lb, gen_kmedians_lb_with_dim, kmeans_lb_default_dim, kmedians_lb_dim,
    min_differing_coordinates, partition_median_bound, FirstSplit, PartitionBound,
};
pub use oracle::{
    brute_force_oracle, partition_opt, tree_opt, tree_opt_tree, OracleMode,
    PARTITION_OPT_MAX_POINTS, TREE_OPT_MAX_CENTERS,
};
pub use reference::solve_reference;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::cost::nearest_center_cost;
use crate::error::{Error, Result};
use crate::geometry::{CenterSet, Dataset, Objective};

/// A generated dataset with its intended centers and known costs.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceBundle {
    pub generator: &'static str,
    pub k: usize,
    pub d: usize,
    pub seed: Option<u64>,
    pub data: Dataset,
    pub centers: CenterSet,
    /// Intended center of each point.
    pub labels: Vec<usize>,
    pub planted_kmedians_cost: Option<f64>,
    pub planted_kmeans_cost: Option<f64>,
    /// Generator-specific measurements, e.g. achieved separation.
    pub properties: Vec<(&'static str, f64)>,
}

impl InstanceBundle {
    pub fn planted_cost(&self, objective: Objective) -> Option<f64> {
        match objective {
            Objective::KMedians => self.planted_kmedians_cost,
            Objective::KMeans => self.planted_kmeans_cost,
            Objective::KCenter => None,
        }
    }

    pub fn property(&self, name: &str) -> Option<f64> {
        self.properties
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, v)| v)
    }

    pub fn n(&self) -> usize {
        self.data.len()
    }
}

/// Checks a closed-form planted cost against the nearest-center cost.
fn confirm_planted(
    data: &Dataset,
    centers: &CenterSet,
    objective: Objective,
    expected: f64,
) -> Result<f64> {
    let actual = nearest_center_cost(data, centers, objective)?.total_cost;
    if (actual - expected).abs() > 1e-9 * expected.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "planted {objective} cost {expected} disagrees with nearest-center cost {actual}"
        )));
    }
    Ok(actual)
}

/// `k` Gaussian blobs with means uniform in `[0, 10]^d` and per-coordinate
/// standard deviation `spread`; point `j` belongs to blob `j mod k`.
pub fn gen_blobs(k: usize, d: usize, n: usize, spread: f64, seed: u64) -> Result<InstanceBundle> {
    if k == 0 || d == 0 || n < k {
        return Err(Error::InvalidArgument(format!(
            "blobs need n >= k >= 1 and d >= 1, got n={n} k={k} d={d}"
        )));
    }
    if !(spread >= 0.0) || !spread.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spread must be a finite non-negative number, got {spread}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let means: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            (0..d)
                .map(|_| rand::Rng::random_range(&mut rng, 0.0..10.0))
                .collect()
        })
        .collect();
    let noise = Normal::new(0.0, spread).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let labels: Vec<usize> = (0..n).map(|j| j % k).collect();
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&b| {
            means[b]
                .iter()
                .map(|m| m + noise.sample(&mut rng))
                .collect()
        })
        .collect();
    let data = Dataset::new(rows)?;
    let centers = CenterSet::new(means)?;
    centers.ensure_distinct()?;
    let kmedians = nearest_center_cost(&data, &centers, Objective::KMedians)?.total_cost;
    let kmeans = nearest_center_cost(&data, &centers, Objective::KMeans)?.total_cost;
    Ok(InstanceBundle {
        generator: "blobs",
        k,
        d,
        seed: Some(seed),
        data,
        centers,
        labels,
        planted_kmedians_cost: Some(kmedians),
        planted_kmeans_cost: Some(kmeans),
        properties: vec![("spread", spread)],
    })
}
