//! Explainable 2-means: the exhaustive single-threshold sweep and the
//! randomized splitter that draws `i` proportional to `R_i^2` and cuts at
//! `R_i * a` for `a` from the distribution with CDF `F`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::tree_cost;
use crate::error::{Error, Result};
use crate::geometry::{ensure_dim, sq_l2, CenterSet, Dataset, Objective};
use crate::sampling::weighted_index;
use crate::tree::{Node, NodeId, ThresholdTree};

/// Distribution on `[0, 1]` with CDF `F(x) = 2x^2` on `[0, 1/2]` and
/// `1 - 2(1-x)^2` on `[1/2, 1]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FDistribution;

impl FDistribution {
    pub fn cdf(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x <= 0.5 {
            2.0 * x * x
        } else if x < 1.0 {
            1.0 - 2.0 * (1.0 - x) * (1.0 - x)
        } else {
            1.0
        }
    }

    pub fn inverse(u: f64) -> f64 {
        if u <= 0.5 {
            (u / 2.0).sqrt()
        } else {
            1.0 - ((1.0 - u) / 2.0).sqrt()
        }
    }

    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        Self::inverse(rng.random::<f64>())
    }
}

/// `sum R_i^2 (1 - 2a_i) * sum R_i^2 F(a_i) <= 2 sum R_i^2 * sum R_i^2 a_i^2`,
/// evaluated with a rounding allowance proportional to the magnitudes
/// involved. Returns the verdict.
pub fn algebraic_lemma_check(r: &[f64], alpha: &[f64]) -> bool {
    assert_eq!(r.len(), alpha.len(), "length mismatch");
    let (mut s_lin, mut s_lin_abs, mut s_f, mut s_sq, mut s_a2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&ri, &a) in r.iter().zip(alpha) {
        let w = ri * ri;
        s_lin += w * (1.0 - 2.0 * a);
        s_lin_abs += w * (1.0 + 2.0 * a.abs());
        s_f += w * FDistribution::cdf(a);
        s_sq += w;
        s_a2 += w * a * a;
    }
    let lhs = s_lin * s_f;
    let rhs = 2.0 * s_sq * s_a2;
    let slack = 16.0 * f64::EPSILON * (s_lin_abs * s_f + rhs);
    lhs <= rhs + slack
}

/// Which centers the exhaustive sweep charges each side to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TwoMeansVariant {
    /// Each side pays its distance to the given center on that side; only
    /// thresholds strictly between the two centers are considered.
    FixedCenters,
    /// Each side pays its distance to its own centroid; every threshold
    /// splitting the data is considered.
    Refit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactTwoMeans {
    pub tree: ThresholdTree,
    /// The given centers for [`TwoMeansVariant::FixedCenters`], the two side
    /// centroids for [`TwoMeansVariant::Refit`].
    pub centers: CenterSet,
    pub cost: f64,
}

/// Tree with one split `x_dim < threshold`, left leaf `left`, right leaf
/// `1 - left`.
fn single_split(d: usize, dim: usize, threshold: f64, left: usize) -> Result<ThresholdTree> {
    ThresholdTree::from_parts(
        vec![
            Node::Split {
                dim,
                threshold,
                left: NodeId(1),
                right: NodeId(2),
            },
            Node::Leaf { center: left },
            Node::Leaf { center: 1 - left },
        ],
        NodeId(0),
        2,
        d,
    )
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    let t = lo + (hi - lo) / 2.0;
    if t <= lo {
        hi
    } else {
        t
    }
}

/// Optimal single-threshold tree for two clusters by a per-dimension sweep
/// with prefix sums: `O(nd + nd log n)` for fixed centers, `O(nd^2 + nd log n)`
/// with refitting.
pub fn exact_2means_tree(
    data: &Dataset,
    centers: &CenterSet,
    variant: TwoMeansVariant,
) -> Result<ExactTwoMeans> {
    if centers.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "the 2-means sweep needs exactly 2 centers, got {}",
            centers.len()
        )));
    }
    ensure_dim(centers.dim(), data.dim())?;
    match variant {
        TwoMeansVariant::FixedCenters => fixed_sweep(data, centers),
        TwoMeansVariant::Refit => refit_sweep(data),
    }
}

fn sorted_by_dim(data: &Dataset, r: usize, order: &mut Vec<usize>) {
    order.clear();
    order.extend(0..data.len());
    order.sort_by(|&a, &b| data.coord(a, r).total_cmp(&data.coord(b, r)));
}

fn fixed_sweep(data: &Dataset, centers: &CenterSet) -> Result<ExactTwoMeans> {
    centers.ensure_distinct()?;
    let n = data.len();
    let d = data.dim();
    let to: [Vec<f64>; 2] = [0, 1].map(|c| data.iter().map(|x| sq_l2(x, centers.get(c))).collect());
    let mut best: Option<(f64, usize, f64, usize)> = None;
    let mut order = Vec::with_capacity(n);
    let mut values = Vec::new();
    for r in 0..d {
        let (c0, c1) = (centers.coord(0, r), centers.coord(1, r));
        if c0 == c1 {
            continue;
        }
        let low = if c0 < c1 { 0 } else { 1 };
        let (a, b) = (c0.min(c1), c0.max(c1));
        sorted_by_dim(data, r, &mut order);
        // prefix[j]: first j sorted points to the low center; suffix[j]: the
        // rest to the high center.
        let mut prefix = vec![0.0; n + 1];
        let mut suffix = vec![0.0; n + 1];
        for j in 0..n {
            prefix[j + 1] = prefix[j] + to[low][order[j]];
        }
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1] + to[1 - low][order[j]];
        }
        values.clear();
        values.push(a);
        values.push(b);
        values.extend(
            order
                .iter()
                .map(|&x| data.coord(x, r))
                .filter(|&v| a <= v && v <= b),
        );
        values.sort_by(f64::total_cmp);
        values.dedup();
        let mut j = 0;
        for w in values.windows(2) {
            let t = midpoint(w[0], w[1]);
            while j < n && data.coord(order[j], r) < t {
                j += 1;
            }
            let cost = prefix[j] + suffix[j];
            if best.is_none_or(|(bc, ..)| cost < bc) {
                best = Some((cost, r, t, low));
            }
        }
    }
    let (_, dim, threshold, low) = best.expect("distinct centers differ in some dimension");
    let tree = single_split(d, dim, threshold, low)?;
    let cost = tree_cost(&tree, data, centers, Objective::KMeans)?.total_cost;
    Ok(ExactTwoMeans {
        tree,
        centers: centers.clone(),
        cost,
    })
}

fn refit_sweep(data: &Dataset) -> Result<ExactTwoMeans> {
    let n = data.len();
    let d = data.dim();
    let total_sq: f64 = data
        .iter()
        .map(|x| x.iter().map(|v| v * v).sum::<f64>())
        .sum();
    let mut total = vec![0.0; d];
    for x in data.iter() {
        for (s, v) in total.iter_mut().zip(x) {
            *s += v;
        }
    }
    let mut best: Option<(f64, usize, f64)> = None;
    let mut order = Vec::with_capacity(n);
    let mut sum = vec![0.0; d];
    for r in 0..d {
        sorted_by_dim(data, r, &mut order);
        sum.iter_mut().for_each(|s| *s = 0.0);
        let mut sq = 0.0;
        for j in 1..n {
            let x = data.get(order[j - 1]);
            for (s, v) in sum.iter_mut().zip(x) {
                *s += v;
            }
            sq += x.iter().map(|v| v * v).sum::<f64>();
            let (lo, hi) = (data.coord(order[j - 1], r), data.coord(order[j], r));
            if lo == hi {
                continue;
            }
            let (nl, nr) = (j as f64, (n - j) as f64);
            let left_norm: f64 = sum.iter().map(|s| s * s).sum();
            let right_norm: f64 = sum.iter().zip(&total).map(|(s, t)| (t - s) * (t - s)).sum();
            let cost = (sq - left_norm / nl) + (total_sq - sq - right_norm / nr);
            if best.is_none_or(|(bc, ..)| cost < bc) {
                best = Some((cost, r, midpoint(lo, hi)));
            }
        }
    }
    let Some((_, dim, threshold)) = best else {
        return Err(Error::InvalidArgument(
            "all points coincide; no threshold splits the data".into(),
        ));
    };
    let (left, right): (Vec<usize>, Vec<usize>) =
        (0..n).partition(|&i| data.coord(i, dim) < threshold);
    let centroid = |idx: &[usize]| crate::cost::optimal_center(data, idx, Objective::KMeans);
    let centers = CenterSet::new(vec![centroid(&left), centroid(&right)])?;
    let tree = single_split(d, dim, threshold, 0)?;
    let cost = tree_cost(&tree, data, &centers, Objective::KMeans)?.total_cost;
    Ok(ExactTwoMeans {
        tree,
        centers,
        cost,
    })
}

/// Shift and per-dimension reflection taking the first center to the origin
/// and the second to `(R_1, ..., R_d)` with every `R_i >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalFrame {
    pub origin: Vec<f64>,
    pub signs: Vec<f64>,
    pub extents: Vec<f64>,
}

impl CanonicalFrame {
    pub fn new(centers: &CenterSet) -> Result<Self> {
        if centers.len() != 2 {
            return Err(Error::InvalidArgument(format!(
                "expected 2 centers, got {}",
                centers.len()
            )));
        }
        centers.ensure_distinct()?;
        let (m1, m2) = (centers.get(0), centers.get(1));
        let signs: Vec<f64> = m1
            .iter()
            .zip(m2)
            .map(|(a, b)| if b >= a { 1.0 } else { -1.0 })
            .collect();
        let extents = m1.iter().zip(m2).map(|(a, b)| (b - a).abs()).collect();
        Ok(Self {
            origin: m1.to_vec(),
            signs,
            extents,
        })
    }

    pub fn to_canonical(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.origin)
            .zip(&self.signs)
            .map(|((v, o), s)| s * (v - o))
            .collect()
    }

    pub fn to_original(&self, dim: usize, canonical: f64) -> f64 {
        self.origin[dim] + self.signs[dim] * canonical
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoMeansCut {
    pub dim: usize,
    pub threshold: f64,
    /// The `a` drawn from [`FDistribution`].
    pub fraction: f64,
}

/// Line `{x_i = R_i a}` in the canonical frame with `i` proportional to
/// `R_i^2` and `a ~ F`, returned in original coordinates. Draws landing on a
/// center coordinate are redrawn.
pub fn random_2means_split<R: Rng + ?Sized>(
    centers: &CenterSet,
    rng: &mut R,
) -> Result<TwoMeansCut> {
    let frame = CanonicalFrame::new(centers)?;
    let weights: Vec<f64> = frame.extents.iter().map(|e| e * e).collect();
    let dim = weighted_index(rng, &weights).expect("distinct centers give a positive extent");
    let (c0, c1) = (centers.coord(0, dim), centers.coord(1, dim));
    loop {
        let a = FDistribution::sample(rng);
        let threshold = frame.to_original(dim, frame.extents[dim] * a);
        if threshold != c0 && threshold != c1 && threshold > c0.min(c1) && threshold < c0.max(c1) {
            return Ok(TwoMeansCut {
                dim,
                threshold,
                fraction: a,
            });
        }
    }
}

pub fn random_2means_split_seeded(centers: &CenterSet, seed: u64) -> Result<TwoMeansCut> {
    random_2means_split(centers, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// The one-split tree for a cut, each side keeping the center on that side.
pub fn cut_tree(centers: &CenterSet, cut: &TwoMeansCut) -> Result<ThresholdTree> {
    let left = if centers.coord(0, cut.dim) < cut.threshold {
        0
    } else {
        1
    };
    let tree = single_split(centers.dim(), cut.dim, cut.threshold, left)?;
    tree.validate_against(centers)?;
    Ok(tree)
}
