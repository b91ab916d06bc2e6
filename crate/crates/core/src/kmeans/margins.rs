use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::CenterSet;
use crate::sampling::{uniform, weighted_index};

/// Log factor used in the margins: `ln(max(k, 3))`, so the intervals stay
/// non-empty for `k = 2`.
pub fn margin_log(k: usize) -> f64 {
    (k.max(3) as f64).ln()
}

/// The `i`-th admissible gap in one dimension: thresholds keeping distance
/// at least `R_r / (10 L min(i, k' - i))` from every center coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginInterval {
    pub dim: usize,
    /// Number of node centers below the interval, `1..k'`.
    pub gap: usize,
    pub low: f64,
    pub high: f64,
    pub balance: usize,
    /// `R_r * (high - low) / balance`.
    pub weight: f64,
}

impl MarginInterval {
    pub fn len(&self) -> f64 {
        self.high - self.low
    }
}

/// All non-empty margin intervals of a node across every dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginIntervals {
    pub extents: Vec<f64>,
    pub intervals: Vec<MarginInterval>,
}

/// A threshold drawn from [`MarginIntervals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCut {
    pub dim: usize,
    pub threshold: f64,
    pub left_centers: usize,
    pub balance: usize,
}

impl MarginIntervals {
    /// `columns[r]` holds the node's center coordinates in dimension `r`,
    /// sorted ascending; `k` is the total number of centers in the tree.
    pub fn from_sorted_columns(columns: &[Vec<f64>], k: usize) -> Self {
        let log = margin_log(k);
        let mut extents = Vec::with_capacity(columns.len());
        let mut intervals = Vec::new();
        for (r, xs) in columns.iter().enumerate() {
            let n = xs.len();
            let extent = if n == 0 { 0.0 } else { xs[n - 1] - xs[0] };
            extents.push(extent);
            if !(extent > 0.0) {
                continue;
            }
            for i in 1..n {
                let balance = i.min(n - i);
                let margin = extent / (10.0 * log * balance as f64);
                let (low, high) = (xs[i - 1] + margin, xs[i] - margin);
                if high > low {
                    intervals.push(MarginInterval {
                        dim: r,
                        gap: i,
                        low,
                        high,
                        balance,
                        weight: extent * (high - low) / balance as f64,
                    });
                }
            }
        }
        Self { extents, intervals }
    }

    pub fn for_node(centers: &CenterSet, node_centers: &[usize], k: usize) -> Self {
        let columns: Vec<Vec<f64>> = (0..centers.dim())
            .map(|r| {
                let mut col: Vec<f64> = node_centers.iter().map(|&i| centers.coord(i, r)).collect();
                col.sort_by(f64::total_cmp);
                col
            })
            .collect();
        Self::from_sorted_columns(&columns, k)
    }

    /// Probability that `r` drawn proportional to `R_r^2` and `t` uniform on
    /// `[a_r, b_r]` land in an admissible interval:
    /// `sum_r R_r * (admissible length in r) / sum_r R_r^2`.
    pub fn measure(&self) -> f64 {
        let denom: f64 = self.extents.iter().map(|e| e * e).sum();
        if !(denom > 0.0) {
            return 0.0;
        }
        let num: f64 = self
            .intervals
            .iter()
            .map(|iv| self.extents[iv.dim] * iv.len())
            .sum();
        num / denom
    }

    /// Picks an interval with probability proportional to its weight, then a
    /// threshold uniformly inside it.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<RandomCut> {
        let weights: Vec<f64> = self.intervals.iter().map(|iv| iv.weight).collect();
        let iv = &self.intervals[weighted_index(rng, &weights)?];
        Some(RandomCut {
            dim: iv.dim,
            threshold: uniform(rng, iv.low, iv.high),
            left_centers: iv.gap,
            balance: iv.balance,
        })
    }
}

/// Midpoint of the widest gap between consecutive center coordinates in the
/// dimension with the largest extent.
pub fn widest_gap_cut(columns: &[Vec<f64>]) -> Option<RandomCut> {
    let (dim, col) = columns
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() >= 2)
        .max_by(|(_, a), (_, b)| (a[a.len() - 1] - a[0]).total_cmp(&(b[b.len() - 1] - b[0])))?;
    let n = col.len();
    let (gap, width) = (1..n)
        .map(|i| (i, col[i] - col[i - 1]))
        .fold(
            (0, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    if !(width > 0.0) {
        return None;
    }
    let mut t = col[gap - 1] + width / 2.0;
    if t <= col[gap - 1] {
        t = col[gap];
    }
    Some(RandomCut {
        dim,
        threshold: t,
        left_centers: gap,
        balance: gap.min(n - gap),
    })
}

/// Randomized split of a node from its centers alone.
pub fn random_split<R: Rng + ?Sized>(
    node_centers: &[usize],
    centers: &CenterSet,
    k: usize,
    rng: &mut R,
) -> Result<RandomCut> {
    if node_centers.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a split needs at least two centers, node has {}",
            node_centers.len()
        )));
    }
    let intervals = MarginIntervals::for_node(centers, node_centers, k);
    if let Some(cut) = intervals.sample(rng) {
        return Ok(cut);
    }
    let columns: Vec<Vec<f64>> = (0..centers.dim())
        .map(|r| {
            let mut col: Vec<f64> = node_centers.iter().map(|&i| centers.coord(i, r)).collect();
            col.sort_by(f64::total_cmp);
            col
        })
        .collect();
    widest_gap_cut(&columns).ok_or(Error::DuplicateCenters {
        first: node_centers[0].min(node_centers[1]),
        second: node_centers[0].max(node_centers[1]),
    })
}
