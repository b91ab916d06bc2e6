//! Point sets, center sets, metrics and bounding boxes.

use std::fmt;

use crate::error::{Error, Result};

/// Row-major storage shared by [`Dataset`] and [`CenterSet`].
#[derive(Debug, Clone, PartialEq)]
struct Rows {
    dim: usize,
    flat: Vec<f64>,
}

impl Rows {
    fn from_rows(rows: Vec<Vec<f64>>, what: &'static str) -> Result<Self> {
        let first = rows.first().ok_or(Error::Empty(what))?;
        let dim = first.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        let mut flat = Vec::with_capacity(rows.len() * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(dim, flat, what)
    }

    fn from_flat(dim: usize, flat: Vec<f64>, what: &'static str) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        if flat.is_empty() {
            return Err(Error::Empty(what));
        }
        if !flat.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "flat buffer of length {} is not a multiple of dimension {dim}",
                flat.len()
            )));
        }
        if let Some(pos) = flat.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what,
                index: pos / dim,
            });
        }
        Ok(Self { dim, flat })
    }

    #[inline]
    fn row(&self, i: usize) -> &[f64] {
        &self.flat[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    fn len(&self) -> usize {
        self.flat.len() / self.dim
    }
}

macro_rules! point_rows {
    ($name:ident, $what:literal) => {
        impl $name {
            /// Builds the set from rows; all rows must share one dimension `d >= 1`
            /// and at least one row is required.
            pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
                Rows::from_rows(rows, $what).map(Self)
            }

            pub fn from_flat(dim: usize, flat: Vec<f64>) -> Result<Self> {
                Rows::from_flat(dim, flat, $what).map(Self)
            }

            #[inline]
            pub fn dim(&self) -> usize {
                self.0.dim
            }

            #[inline]
            pub fn len(&self) -> usize {
                self.0.len()
            }

            /// Always false; kept for clippy's `len_without_is_empty`.
            #[inline]
            pub fn is_empty(&self) -> bool {
                self.0.flat.is_empty()
            }

            #[inline]
            pub fn get(&self, i: usize) -> &[f64] {
                self.0.row(i)
            }

            #[inline]
            pub fn coord(&self, i: usize, r: usize) -> f64 {
                self.0.flat[i * self.0.dim + r]
            }

            pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
                self.0.flat.chunks_exact(self.0.dim)
            }

            pub fn as_flat(&self) -> &[f64] {
                &self.0.flat
            }

            pub fn to_rows(&self) -> Vec<Vec<f64>> {
                self.iter().map(<[f64]>::to_vec).collect()
            }

            /// Largest absolute coordinate.
            pub fn max_abs(&self) -> f64 {
                self.0.flat.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
            }
        }
    };
}

/// The points to be clustered.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset(Rows);
point_rows!(Dataset, "dataset");

/// Reference centers, usually produced by a non-explainable solver.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSet(Rows);
point_rows!(CenterSet, "center set");

impl CenterSet {
    /// Fails with [`Error::DuplicateCenters`] for the lowest-index identical pair.
    pub fn ensure_distinct(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| lexicographic(self.get(a), self.get(b)).then_with(|| a.cmp(&b)));
        let mut worst: Option<(usize, usize)> = None;
        for w in order.windows(2) {
            if self.get(w[0]) == self.get(w[1]) {
                let pair = (w[0].min(w[1]), w[0].max(w[1]));
                worst = Some(match worst {
                    Some(p) if p <= pair => p,
                    _ => pair,
                });
            }
        }
        match worst {
            Some((first, second)) => Err(Error::DuplicateCenters { first, second }),
            None => Ok(()),
        }
    }

    pub fn ensure_dim(&self, dim: usize) -> Result<()> {
        ensure_dim(self.dim(), dim)
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

pub(crate) fn ensure_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Clustering objective. Determines both the per-point cost and the metric used
/// for nearest-center assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Sum of l1 distances.
    KMedians,
    /// Sum of squared l2 distances.
    KMeans,
    /// Maximum l2 distance.
    KCenter,
}

impl Objective {
    #[inline]
    pub fn point_cost(self, x: &[f64], c: &[f64]) -> f64 {
        match self {
            Objective::KMedians => l1(x, c),
            Objective::KMeans => sq_l2(x, c),
            Objective::KCenter => sq_l2(x, c).sqrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::KMedians => "kmedians",
            Objective::KMeans => "kmeans",
            Objective::KCenter => "kcenter",
        }
    }

    /// Nearest center under this objective's metric; ties go to the lowest index.
    pub fn nearest(self, x: &[f64], centers: &CenterSet) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, c) in centers.iter().enumerate() {
            let cost = self.point_cost(x, c);
            if cost < best.1 {
                best = (i, cost);
            }
        }
        best
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmedians" => Ok(Objective::KMedians),
            "kmeans" => Ok(Objective::KMeans),
            "kcenter" => Ok(Objective::KCenter),
            other => Err(Error::InvalidArgument(format!(
                "unknown objective `{other}`"
            ))),
        }
    }
}

#[inline]
pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

#[inline]
pub fn sq_l2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Smallest axis-parallel box containing a set of centers.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl BoundingBox {
    pub fn of_centers(centers: &CenterSet, subset: &[usize]) -> Result<Self> {
        let (&first, rest) = subset.split_first().ok_or(Error::Empty("center subset"))?;
        let mut low = centers.get(first).to_vec();
        let mut high = low.clone();
        for &i in rest {
            for (r, &v) in centers.get(i).iter().enumerate() {
                if v < low[r] {
                    low[r] = v;
                }
                if v > high[r] {
                    high[r] = v;
                }
            }
        }
        Ok(Self { low, high })
    }

    pub fn dim(&self) -> usize {
        self.low.len()
    }

    /// Per-dimension side lengths `R_r = high_r - low_r`.
    pub fn extents(&self) -> Vec<f64> {
        self.low
            .iter()
            .zip(&self.high)
            .map(|(a, b)| b - a)
            .collect()
    }

    /// `sum_r R_r^2`, the squared diagonal.
    pub fn squared_diameter(&self) -> f64 {
        self.extents().iter().map(|r| r * r).sum()
    }

    pub fn is_degenerate(&self) -> bool {
        self.low == self.high
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_and_empty() {
        assert_eq!(Dataset::new(vec![]), Err(Error::Empty("dataset")));
        assert_eq!(
            Dataset::new(vec![vec![1.0, 2.0], vec![1.0]]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            CenterSet::new(vec![vec![f64::NAN]]),
            Err(Error::NonFinite { index: 0, .. })
        ));
    }

    #[test]
    fn bounding_box_examples() {
        let c = CenterSet::new(vec![vec![0.0, 0.0]]).unwrap();
        let b = BoundingBox::of_centers(&c, &[0]).unwrap();
        assert_eq!(
            (b.low.clone(), b.high.clone()),
            (vec![0.0, 0.0], vec![0.0, 0.0])
        );

        let c = CenterSet::new(vec![vec![0.0, 1.0], vec![2.0, -1.0]]).unwrap();
        let b = BoundingBox::of_centers(&c, &[0, 1]).unwrap();
        assert_eq!(b.low, vec![0.0, -1.0]);
        assert_eq!(b.high, vec![2.0, 1.0]);
        assert_eq!(b.extents(), vec![2.0, 2.0]);

        let c = CenterSet::new(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let b = BoundingBox::of_centers(&c, &[0, 1]).unwrap();
        assert!(b.is_degenerate());
        assert_eq!(b.extents(), vec![0.0, 0.0]);
        assert_eq!(
            c.ensure_distinct(),
            Err(Error::DuplicateCenters {
                first: 0,
                second: 1
            })
        );

        assert_eq!(
            BoundingBox::of_centers(&c, &[]),
            Err(Error::Empty("center subset"))
        );
    }

    #[test]
    fn nearest_breaks_ties_low() {
        let c = CenterSet::new(vec![vec![-1.0], vec![1.0]]).unwrap();
        assert_eq!(Objective::KMeans.nearest(&[0.0], &c), (0, 1.0));
        assert_eq!(Objective::KMedians.nearest(&[0.9], &c).0, 1);
    }
}
