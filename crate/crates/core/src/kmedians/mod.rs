//! Explainable k-medians.
//!
//! Both builders look only at the centers. [`build_simplified`] draws lines
//! `{x_r = z}` with `r` uniform over the dimensions and `z` uniform on
//! `[-B, B]`, and applies each line to every leaf whose center box it cuts.
//! [`build_fast`] splits each node directly: `r` with probability proportional
//! to the side length `R_r` of the node's center box and `z` uniform inside
//! that side. For every fixed point the two builders induce the same
//! distribution over assigned centers, and the fast one runs in
//! `O(k d log^2 k)`.

mod ordered_index;

pub use ordered_index::{Entry, OrderedCoordinateIndex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, CenterSet};
use crate::sampling::{uniform, weighted_index};
use crate::tree::{BuildStats, Node, NodeId, SplitRecord, ThresholdTree, TreeAssembler, TreeBuild};

/// Rejection cap for [`build_simplified`].
pub const SIMPLIFIED_SAMPLE_CAP: u64 = 1_000_000_000;

/// Resampling cap for a single open-interval threshold draw.
const THRESHOLD_RETRY_CAP: u64 = 1_000;

/// Half-width `B` of a cube `[-B, B]^d` containing every center and point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedDomain(f64);

impl BoundedDomain {
    pub fn new(bound: f64) -> Result<Self> {
        if bound.is_finite() && bound > 0.0 {
            Ok(Self(bound))
        } else {
            Err(Error::InvalidArgument(format!(
                "domain half-width must be positive and finite, got {bound}"
            )))
        }
    }

    /// Smallest cube containing all centers (and points, when given); unit
    /// cube if everything sits at the origin.
    pub fn covering(centers: &CenterSet, points: Option<&crate::Dataset>) -> Self {
        let m = points.map_or(0.0, |p| p.max_abs()).max(centers.max_abs());
        Self(if m > 0.0 { m } else { 1.0 })
    }

    pub fn bound(self) -> f64 {
        self.0
    }
}

/// Dimension sampling weights `R_r / sum R` for a node's centers.
pub fn split_probability_vector(centers: &CenterSet, node: &[usize]) -> Result<Vec<(usize, f64)>> {
    let extents = BoundingBox::of_centers(centers, node)?.extents();
    let total: f64 = extents.iter().sum();
    if !(total > 0.0) {
        return Err(match node {
            [a, b, ..] => Error::DuplicateCenters {
                first: *a.min(b),
                second: *a.max(b),
            },
            _ => Error::InvalidArgument("a split needs at least two centers".into()),
        });
    }
    Ok(extents
        .into_iter()
        .enumerate()
        .map(|(r, e)| (r, e / total))
        .collect())
}

fn prepare(centers: &CenterSet) -> Result<()> {
    centers.ensure_distinct()
}

/// Seeded entry point for [`build_fast_with`].
pub fn build_fast(centers: &CenterSet, seed: u64) -> Result<TreeBuild> {
    build_fast_with(centers, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// One open node of the fast builder: one index per dimension, all holding
/// exactly the node's centers.
struct Cell {
    id: NodeId,
    by_dim: Vec<OrderedCoordinateIndex>,
}

impl Cell {
    fn len(&self) -> usize {
        self.by_dim[0].len()
    }

    fn bounds(&self, r: usize) -> (f64, f64) {
        let idx = &self.by_dim[r];
        (idx.min().unwrap().value, idx.max().unwrap().value)
    }
}

/// Builds the per-dimension indexes of a new cell and records, for every
/// member, its position in each of them: `locator[r * k + i]`.
fn build_cell(id: NodeId, centers: &CenterSet, members: &[usize], locator: &mut [u32]) -> Cell {
    let k = centers.len();
    let mut column: Vec<Entry> = Vec::with_capacity(members.len());
    let by_dim = (0..centers.dim())
        .map(|r| {
            column.clear();
            column.extend(members.iter().map(|&i| Entry {
                value: centers.coord(i, r),
                center: i,
            }));
            let index = OrderedCoordinateIndex::from_unsorted(std::mem::take(&mut column));
            for p in 0..index.len() {
                locator[r * k + index.entry_at(p).center] = p as u32;
            }
            index
        })
        .collect();
    Cell { id, by_dim }
}

pub fn build_fast_with<R: Rng + ?Sized>(centers: &CenterSet, rng: &mut R) -> Result<TreeBuild> {
    prepare(centers)?;
    let k = centers.len();
    let d = centers.dim();
    let mut asm = TreeAssembler::new(d, 2 * k - 1);
    let mut stats = BuildStats::default();
    let mut audit = Vec::with_capacity(k - 1);

    let root = asm.reserve();
    let all: Vec<usize> = (0..k).collect();
    let mut locator = vec![0u32; k * d];
    let mut stack = vec![build_cell(root, centers, &all, &mut locator)];
    let mut extents = vec![0.0; d];

    while let Some(mut cell) = stack.pop() {
        let size = cell.len();
        if size == 1 {
            let center = cell.by_dim[0].min().unwrap().center;
            asm.set(cell.id, Node::Leaf { center });
            continue;
        }
        for (r, e) in extents.iter_mut().enumerate() {
            let (a, b) = cell.bounds(r);
            *e = b - a;
        }
        stats.samples += 1;
        let r = weighted_index(rng, &extents).expect("distinct centers give a positive extent");
        let (a, b) = cell.bounds(r);
        let index = &cell.by_dim[r];
        let mut z = uniform(rng, a, b);
        let mut tries = 1;
        // Open interval, never on a center coordinate.
        while z <= a || index.count_below(z) != index.count_at_most(z) {
            if tries >= THRESHOLD_RETRY_CAP {
                return Err(Error::SampleCapExceeded {
                    cap: THRESHOLD_RETRY_CAP,
                    context: format!("no admissible threshold in ({a}, {b})"),
                });
            }
            z = uniform(rng, a, b);
            tries += 1;
        }
        stats.samples += tries;

        let left_count = index.count_below(z);
        let right_count = size - left_count;
        debug_assert!(left_count >= 1 && right_count >= 1);
        let left_is_smaller = left_count <= right_count;
        let moved: Vec<usize> = if left_is_smaller {
            index.first(left_count)
        } else {
            index.last(right_count)
        }
        .into_iter()
        .map(|e| e.center)
        .collect();

        // Delete the smaller side from every index of this cell and rebuild
        // it as a cell of its own.
        for (q, old) in cell.by_dim.iter_mut().enumerate() {
            for &c in &moved {
                let removed = old.remove_at(locator[q * k + c] as usize);
                debug_assert!(removed);
            }
        }
        stats.work += moved.len();
        stats.splits += 1;

        let left = asm.reserve();
        let right = asm.reserve();
        asm.set(
            cell.id,
            Node::Split {
                dim: r,
                threshold: z,
                left,
                right,
            },
        );
        audit.push(SplitRecord {
            node: cell.id,
            dim: r,
            threshold: z,
            left_centers: left_count,
            right_centers: right_count,
            squared_diameter: extents.iter().map(|e| e * e).sum(),
            mistakes: None,
            correct_points: None,
            correct_cost: None,
            margin_measure: None,
        });

        let (small_id, large_id) = if left_is_smaller {
            (left, right)
        } else {
            (right, left)
        };
        let small = build_cell(small_id, centers, &moved, &mut locator);
        cell.id = large_id;
        #[cfg(debug_assertions)]
        if k <= 256 {
            for c in [&small, &cell] {
                check_cell_bounds(centers, c);
            }
        }
        stack.push(cell);
        stack.push(small);
    }

    let tree = asm.finish(k, audit)?;
    debug_assert!(k > 256 || tree.validate_against(centers).is_ok());
    Ok(TreeBuild { tree, stats })
}

#[cfg(debug_assertions)]
fn check_cell_bounds(centers: &CenterSet, cell: &Cell) {
    let members: Vec<usize> = cell.by_dim[0].iter().map(|e| e.center).collect();
    let bbox = BoundingBox::of_centers(centers, &members).unwrap();
    for (r, idx) in cell.by_dim.iter().enumerate() {
        assert_eq!(idx.len(), members.len());
        assert_eq!(idx.min().unwrap().value, bbox.low[r]);
        assert_eq!(idx.max().unwrap().value, bbox.high[r]);
    }
}

/// Seeded entry point for [`build_simplified_with`].
pub fn build_simplified(
    centers: &CenterSet,
    domain: BoundedDomain,
    seed: u64,
) -> Result<TreeBuild> {
    build_simplified_with(
        centers,
        domain,
        &mut ChaCha8Rng::seed_from_u64(seed),
        SIMPLIFIED_SAMPLE_CAP,
    )
}

/// Global random-line builder. Each draw is a line `{x_r = z}` with `r`
/// uniform and `z` uniform on `[-B, B]`; it splits every open leaf whose
/// center box it cuts strictly and is otherwise discarded. Aborts after
/// `sample_cap` draws. Only practical for small domains.
pub fn build_simplified_with<R: Rng + ?Sized>(
    centers: &CenterSet,
    domain: BoundedDomain,
    rng: &mut R,
    sample_cap: u64,
) -> Result<TreeBuild> {
    prepare(centers)?;
    let bound = domain.bound();
    for (i, c) in centers.iter().enumerate() {
        if c.iter().any(|v| v.abs() > bound) {
            return Err(Error::OutsideDomain {
                what: "center",
                index: i,
                bound,
            });
        }
    }
    let k = centers.len();
    let d = centers.dim();
    let mut asm = TreeAssembler::new(d, 2 * k - 1);
    let mut stats = BuildStats::default();
    let mut audit = Vec::with_capacity(k - 1);

    let root = asm.reserve();
    let mut open: Vec<(NodeId, Vec<usize>)> = Vec::new();
    if k == 1 {
        asm.set(root, Node::Leaf { center: 0 });
    } else {
        open.push((root, (0..k).collect()));
    }

    while !open.is_empty() {
        if stats.samples >= sample_cap {
            return Err(Error::SampleCapExceeded {
                cap: sample_cap,
                context: format!("{} leaves still hold several centers", open.len()),
            });
        }
        stats.samples += 1;
        let r = rng.random_range(0..d);
        let z = uniform(rng, -bound, bound);
        if (0..k).any(|i| centers.coord(i, r) == z) {
            continue;
        }
        let mut next = Vec::with_capacity(open.len() + 1);
        for (id, members) in open {
            let (lo, hi) =
                members
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                        let v = centers.coord(i, r);
                        (lo.min(v), hi.max(v))
                    });
            if !(lo < z && z < hi) {
                next.push((id, members));
                continue;
            }
            let squared_diameter = BoundingBox::of_centers(centers, &members)?.squared_diameter();
            let (l, rgt): (Vec<usize>, Vec<usize>) =
                members.into_iter().partition(|&i| centers.coord(i, r) < z);
            let left = asm.reserve();
            let right = asm.reserve();
            asm.set(
                id,
                Node::Split {
                    dim: r,
                    threshold: z,
                    left,
                    right,
                },
            );
            stats.splits += 1;
            stats.work += l.len().min(rgt.len());
            audit.push(SplitRecord {
                node: id,
                dim: r,
                threshold: z,
                left_centers: l.len(),
                right_centers: rgt.len(),
                squared_diameter,
                mistakes: None,
                correct_points: None,
                correct_cost: None,
                margin_measure: None,
            });
            for (child, part) in [(left, l), (right, rgt)] {
                if part.len() == 1 {
                    asm.set(child, Node::Leaf { center: part[0] });
                } else {
                    next.push((child, part));
                }
            }
        }
        open = next;
    }

    let tree = asm.finish(k, audit)?;
    debug_assert!(tree.validate_against(centers).is_ok());
    Ok(TreeBuild { tree, stats })
}

/// Convenience: fast tree over the centers, discarding instrumentation.
pub fn explain(centers: &CenterSet, seed: u64) -> Result<ThresholdTree> {
    build_fast(centers, seed).map(|b| b.tree)
}
