use crate::error::{Error, Result};
use crate::geometry::{CenterSet, Dataset};

/// A candidate line `{x_dim = threshold}` at a node, with the number of
/// correctly classified points it separates from their nearest center and
/// the smaller of its two center counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub dim: usize,
    pub threshold: f64,
    pub mistakes: usize,
    pub balance: usize,
    pub left_centers: usize,
}

impl SplitCandidate {
    pub fn ratio(&self) -> f64 {
        self.mistakes as f64 / self.balance as f64
    }

    /// Exact comparison of `mistakes / balance` by cross-multiplication.
    fn ratio_lt(&self, other: &Self) -> bool {
        (self.mistakes as u128) * (other.balance as u128)
            < (other.mistakes as u128) * (self.balance as u128)
    }
}

/// Every combinatorially distinct line of the node, in order of dimension and
/// then threshold. Thresholds are midpoints between consecutive distinct
/// values of the node's center coordinates and correctly classified point
/// coordinates inside `(a_r, b_r)`; when a midpoint rounds onto the lower
/// value the upper value is used instead.
pub fn sweep_candidates(
    node_centers: &[usize],
    cor: &[usize],
    data: Option<&Dataset>,
    centers: &CenterSet,
    nearest: &[usize],
) -> Result<Vec<SplitCandidate>> {
    if node_centers.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a split needs at least two centers, node has {}",
            node_centers.len()
        )));
    }
    if !cor.is_empty() && data.is_none() {
        return Err(Error::InvalidArgument(
            "point indices given without a dataset".into(),
        ));
    }
    let mut out = Vec::new();
    let mut cc = Vec::with_capacity(node_centers.len());
    let mut lo = Vec::with_capacity(cor.len());
    let mut hi = Vec::with_capacity(cor.len());
    let mut values = Vec::with_capacity(cor.len() + node_centers.len());
    for r in 0..centers.dim() {
        cc.clear();
        cc.extend(node_centers.iter().map(|&i| centers.coord(i, r)));
        cc.sort_by(f64::total_cmp);
        let (a, b) = (cc[0], cc[cc.len() - 1]);
        if a == b {
            continue;
        }
        lo.clear();
        hi.clear();
        values.clear();
        values.extend_from_slice(&cc);
        if let Some(data) = data {
            for &x in cor {
                let (p, c) = (data.coord(x, r), centers.coord(nearest[x], r));
                lo.push(p.min(c));
                hi.push(p.max(c));
                if a <= p && p <= b {
                    values.push(p);
                }
            }
        }
        lo.sort_by(f64::total_cmp);
        hi.sort_by(f64::total_cmp);
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let mut t = w[0] + (w[1] - w[0]) / 2.0;
            if t <= w[0] {
                t = w[1];
            }
            let left = cc.partition_point(|&v| v < t);
            let right = cc.len() - left;
            if left == 0 || right == 0 {
                continue;
            }
            // Separated from its center iff lo < t <= hi.
            let mistakes = lo.partition_point(|&v| v < t) - hi.partition_point(|&v| v < t);
            out.push(SplitCandidate {
                dim: r,
                threshold: t,
                mistakes,
                balance: left.min(right),
                left_centers: left,
            });
        }
    }
    if out.is_empty() {
        let (first, second) = (
            node_centers[0].min(node_centers[1]),
            node_centers[0].max(node_centers[1]),
        );
        return Err(Error::DuplicateCenters { first, second });
    }
    Ok(out)
}

/// Line minimizing `mistakes / balance`; ties go to the lower dimension and
/// then the lower threshold.
pub fn sweep_split(
    node_centers: &[usize],
    cor: &[usize],
    data: Option<&Dataset>,
    centers: &CenterSet,
    nearest: &[usize],
) -> Result<SplitCandidate> {
    let all = sweep_candidates(node_centers, cor, data, centers, nearest)?;
    Ok(all
        .into_iter()
        .reduce(|best, c| if c.ratio_lt(&best) { c } else { best })
        .expect("candidate list is non-empty"))
}

/// Line minimizing `mistakes` alone, with the same candidates and tie-breaks
/// as [`sweep_split`].
pub fn imm_split(
    node_centers: &[usize],
    cor: &[usize],
    data: Option<&Dataset>,
    centers: &CenterSet,
    nearest: &[usize],
) -> Result<SplitCandidate> {
    let all = sweep_candidates(node_centers, cor, data, centers, nearest)?;
    Ok(all
        .into_iter()
        .reduce(|best, c| if c.mistakes < best.mistakes { c } else { best })
        .expect("candidate list is non-empty"))
}
