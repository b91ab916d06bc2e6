use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{confirm_planted, InstanceBundle};
use crate::cost::optimal_center;
use crate::error::{Error, Result};
use crate::geometry::{l1, CenterSet, Dataset, Objective};

const KMEDIANS_LB_ATTEMPTS: usize = 100;

/// `ceil(10 log2 k)`.
pub fn kmedians_lb_dim(k: usize) -> usize {
    (10.0 * (k as f64).log2()).ceil().max(1.0) as usize
}

/// Coordinates in which every pair of hypercube centers must differ:
/// `max(ceil(d / 10), 2)`. Two keeps every flipped point nearest to its own
/// center, so the planted cost is the nearest-center cost.
pub fn min_differing_coordinates(d: usize) -> usize {
    d.div_ceil(10).max(2)
}

/// Hypercube instance with `d = ceil(10 log2 k)`.
pub fn gen_kmedians_lb(k: usize, seed: u64) -> Result<InstanceBundle> {
    gen_kmedians_lb_with_dim(k, kmedians_lb_dim(k), seed)
}

/// Centers uniform in `{-1, 1}^d`, redrawn until every pair differs in at
/// least [`min_differing_coordinates`] coordinates; the data are the centers
/// and all their single-coordinate flips, `n = k(d + 1)`, planted k-medians
/// cost `2dk`.
pub fn gen_kmedians_lb_with_dim(k: usize, d: usize, seed: u64) -> Result<InstanceBundle> {
    if k < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "hypercube instance needs k >= 2 and d >= 2, got k={k} d={d}"
        )));
    }
    let need = min_differing_coordinates(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=KMEDIANS_LB_ATTEMPTS {
        let centers: Vec<Vec<f64>> = (0..k)
            .map(|_| {
                (0..d)
                    .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                    .collect()
            })
            .collect();
        let separated = (0..k).all(|i| {
            (i + 1..k).all(|j| {
                centers[i]
                    .iter()
                    .zip(&centers[j])
                    .filter(|(a, b)| a != b)
                    .count()
                    >= need
            })
        });
        if !separated {
            continue;
        }
        let mut rows = Vec::with_capacity(k * (d + 1));
        let mut labels = Vec::with_capacity(k * (d + 1));
        for (i, c) in centers.iter().enumerate() {
            rows.push(c.clone());
            labels.push(i);
            for j in 0..d {
                let mut x = c.clone();
                x[j] = -x[j];
                rows.push(x);
                labels.push(i);
            }
        }
        let data = Dataset::new(rows)?;
        let centers = CenterSet::new(centers)?;
        let planted = confirm_planted(&data, &centers, Objective::KMedians, (2 * d * k) as f64)?;
        return Ok(InstanceBundle {
            generator: "kmedians-lb",
            k,
            d,
            seed: Some(seed),
            data,
            centers,
            labels,
            planted_kmedians_cost: Some(planted),
            planted_kmeans_cost: None,
            properties: vec![
                ("attempts", attempt as f64),
                ("min_differing_coordinates", need as f64),
            ],
        });
    }
    Err(Error::SampleCapExceeded {
        cap: KMEDIANS_LB_ATTEMPTS as u64,
        context: format!("no {k} centers in {{-1,1}}^{d} pairwise differing in {need} coordinates"),
    })
}

/// `max(8 ceil(log2 k), 8)`.
pub fn kmeans_lb_default_dim(k: usize) -> usize {
    (8 * ((k as f64).log2().ceil() as usize)).max(8)
}

pub fn gen_kmeans_lb_default(k: usize, seed: u64) -> Result<InstanceBundle> {
    gen_kmeans_lb(k, kmeans_lb_default_dim(k), seed)
}

/// Permutation instance: coordinate `r` of center `i` is `pi_r(i)` for `d`
/// independent uniform permutations of `1..=k`; the data are `mu_i +- e_j`
/// for every center and dimension, `n = 2dk`, planted k-means cost `2dk`.
/// Point `2(i d + j)` is `mu_i - e_j` and the next one `mu_i + e_j`.
pub fn gen_kmeans_lb(k: usize, d: usize, seed: u64) -> Result<InstanceBundle> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "permutation instance needs k >= 2, got {k}"
        )));
    }
    let min_d = (8.0 * (k as f64).log2()).ceil() as usize;
    if d < min_d {
        return Err(Error::InvalidArgument(format!(
            "permutation instance with k={k} needs d >= {min_d}, got {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = vec![vec![0.0; d]; k];
    let mut perm: Vec<usize> = (1..=k).collect();
    for r in 0..d {
        perm.shuffle(&mut rng);
        for (center, &v) in centers.iter_mut().zip(&perm) {
            center[r] = v as f64;
        }
    }
    let mut rows = Vec::with_capacity(2 * d * k);
    let mut labels = Vec::with_capacity(2 * d * k);
    for (i, c) in centers.iter().enumerate() {
        for j in 0..d {
            for delta in [-1.0, 1.0] {
                let mut x = c.clone();
                x[j] += delta;
                rows.push(x);
                labels.push(i);
            }
        }
    }
    let min_sq = (0..k)
        .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
        .map(|(i, j)| crate::geometry::sq_l2(&centers[i], &centers[j]))
        .fold(f64::INFINITY, f64::min);
    let min_dist = min_sq.sqrt();
    let data = Dataset::new(rows)?;
    let centers = CenterSet::new(centers)?;
    let planted = confirm_planted(&data, &centers, Objective::KMeans, (2 * d * k) as f64)?;
    Ok(InstanceBundle {
        generator: "kmeans-lb",
        k,
        d,
        seed: Some(seed),
        data,
        centers,
        labels,
        planted_kmedians_cost: None,
        planted_kmeans_cost: Some(planted),
        properties: vec![
            ("min_center_distance", min_dist),
            (
                "separation_constant",
                min_dist / (k as f64 * (d as f64).sqrt()),
            ),
        ],
    })
}

/// Instance on which greedy mistake minimization pays `Omega(k)`:
/// `d = 2(k-1)`, `mu_1 = 0`, `mu_{i+1} = e_i + z` with `z` the indicator of
/// the last `k-1` coordinates; data are `3(k-1)` copies of every `mu_i`,
/// `i >= 2`, one copy of `e_j` for each of the first `k-1` coordinates and
/// two copies for each of the last `k-1`. Planted k-medians cost `3(k-1)`.
pub fn gen_imm_adversarial(k: usize) -> Result<InstanceBundle> {
    if k < 3 {
        return Err(Error::InvalidArgument(format!(
            "IMM-adversarial instance needs k >= 3, got {k}"
        )));
    }
    let m = k - 1;
    let d = 2 * m;
    let unit = |j: usize| {
        let mut e = vec![0.0; d];
        e[j] = 1.0;
        e
    };
    let mut centers = vec![vec![0.0; d]];
    for i in 0..m {
        let mut c = unit(i);
        c[m..].iter_mut().for_each(|v| *v = 1.0);
        centers.push(c);
    }
    let mut rows = Vec::with_capacity(3 * m * k);
    let mut labels = Vec::with_capacity(3 * m * k);
    for (i, c) in centers.iter().enumerate().skip(1) {
        for _ in 0..3 * m {
            rows.push(c.clone());
            labels.push(i);
        }
    }
    for j in 0..d {
        let copies = if j < m { 1 } else { 2 };
        for _ in 0..copies {
            rows.push(unit(j));
            labels.push(0);
        }
    }
    let data = Dataset::new(rows)?;
    let centers = CenterSet::new(centers)?;
    let planted = confirm_planted(&data, &centers, Objective::KMedians, (3 * m) as f64)?;
    Ok(InstanceBundle {
        generator: "imm-adversarial",
        k,
        d,
        seed: None,
        data,
        centers,
        labels,
        planted_kmedians_cost: Some(planted),
        planted_kmeans_cost: None,
        properties: Vec::new(),
    })
}

/// One root threshold between consecutive distinct center coordinates and
/// the number of points it separates from their intended center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstSplit {
    pub dim: usize,
    pub threshold: f64,
    pub separated_points: usize,
}

/// Every admissible root split of a bundle, with its separated-point count.
pub fn admissible_first_splits(bundle: &InstanceBundle) -> Vec<FirstSplit> {
    let (data, centers) = (&bundle.data, &bundle.centers);
    let mut out = Vec::new();
    for r in 0..centers.dim() {
        let mut coords: Vec<f64> = centers.iter().map(|c| c[r]).collect();
        coords.sort_by(f64::total_cmp);
        coords.dedup();
        for w in coords.windows(2) {
            let t = w[0] + (w[1] - w[0]) / 2.0;
            let separated_points = (0..data.len())
                .filter(|&x| (data.coord(x, r) < t) != (centers.coord(bundle.labels[x], r) < t))
                .count();
            out.push(FirstSplit {
                dim: r,
                threshold: t,
                separated_points,
            });
        }
    }
    out
}

/// Both sides of the bound "a partition of hypercube points costs at least a
/// quarter of the sum over points of their mean l1 distance to the rest of
/// their part".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionBound {
    pub quarter_sum: f64,
    pub partition_cost: f64,
}

impl PartitionBound {
    pub fn holds(&self) -> bool {
        self.quarter_sum <= self.partition_cost * (1.0 + 1e-12) + 1e-12
    }
}

/// Evaluates [`PartitionBound`] for `labels`, with each part's cost taken at
/// its coordinate-wise median.
pub fn partition_median_bound(data: &Dataset, labels: &[usize]) -> Result<PartitionBound> {
    if labels.len() != data.len() {
        return Err(Error::InvalidArgument(format!(
            "{} labels for {} points",
            labels.len(),
            data.len()
        )));
    }
    let parts = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); parts];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    let mut quarter_sum = 0.0;
    let mut partition_cost = 0.0;
    for part in members.iter().filter(|p| !p.is_empty()) {
        if part.len() > 1 {
            for &i in part {
                let total: f64 = part
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| l1(data.get(i), data.get(j)))
                    .sum();
                quarter_sum += total / (part.len() - 1) as f64;
            }
        }
        let center = optimal_center(data, part, Objective::KMedians);
        partition_cost += part.iter().map(|&i| l1(data.get(i), &center)).sum::<f64>();
    }
    Ok(PartitionBound {
        quarter_sum: quarter_sum / 4.0,
        partition_cost,
    })
}
