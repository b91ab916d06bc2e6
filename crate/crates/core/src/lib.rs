//! Explainable clustering with axis-aligned threshold trees.
//!
//! Given `k` reference centers, a threshold tree has exactly `k` leaves, one
//! per center, and assigns every point by a sequence of single-coordinate
//! comparisons. The builders here produce such trees for k-medians, k-means
//! and 2-means, together with the costs, test instances and brute-force
//! oracles used to judge them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cost;
pub mod error;
pub mod geometry;
pub mod instances;
pub mod kmeans;
pub mod kmedians;
mod sampling;
pub mod tree;
pub mod two_means;

pub use cost::{nearest_center_cost, refit_tree_cost, tree_cost, CostReport, PointCost};
pub use error::{Error, Result};
pub use geometry::{l1, sq_l2, BoundingBox, CenterSet, Dataset, Objective};
pub use tree::{BuildStats, Node, NodeId, Side, SplitRecord, ThresholdTree, TreeBuild};
