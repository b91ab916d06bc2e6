//! Axis-aligned threshold trees.
//!
//! Every internal node tests one coordinate against a threshold: points with
//! `x[dim] < threshold` descend left, points with `x[dim] >= threshold` descend
//! right. Every leaf names exactly one center, and the leaves name each center
//! exactly once.

use crate::error::{Error, Result};
use crate::geometry::{ensure_dim, CenterSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Split {
        dim: usize,
        threshold: f64,
        left: NodeId,
        right: NodeId,
    },
    Leaf {
        center: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    #[inline]
    pub fn of(value: f64, threshold: f64) -> Side {
        if value < threshold {
            Side::Left
        } else {
            Side::Right
        }
    }
}

/// One ancestor decision on the way to a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub dim: usize,
    pub threshold: f64,
    pub side: Side,
}

impl Constraint {
    #[inline]
    pub fn admits(&self, x: &[f64]) -> bool {
        Side::of(x[self.dim], self.threshold) == self.side
    }
}

/// True if `x` lies in the cell described by `path`.
pub fn region_contains(path: &[Constraint], x: &[f64]) -> bool {
    path.iter().all(|c| c.admits(x))
}

/// What a builder observed when it split one node.
///
/// `mistakes`, `correct_points` and `correct_cost` are only known when the
/// builder had access to the data; `margin_measure` only for the randomized
/// k-means splitter.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub node: NodeId,
    pub dim: usize,
    pub threshold: f64,
    pub left_centers: usize,
    pub right_centers: usize,
    /// Sum of squared side lengths of the node's center box.
    pub squared_diameter: f64,
    /// Correctly classified points separated from their nearest center.
    pub mistakes: Option<usize>,
    pub correct_points: Option<usize>,
    /// Sum over correctly classified points of the cost to their nearest center.
    pub correct_cost: Option<f64>,
    /// Probability that a threshold drawn with `r ~ R_r^2`, `t ~ U[a_r, b_r]`
    /// keeps the required margin from every center coordinate.
    pub margin_measure: Option<f64>,
}

impl SplitRecord {
    pub fn centers(&self) -> usize {
        self.left_centers + self.right_centers
    }

    /// `min(|L|, |R|)`.
    pub fn balance(&self) -> usize {
        self.left_centers.min(self.right_centers)
    }
}

/// Instrumentation collected while building a tree.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BuildStats {
    pub splits: usize,
    /// Sum over splits of `min(|L|, |R|)` in centers.
    pub work: usize,
    /// Random draws consumed, including rejected ones.
    pub samples: u64,
    /// Per point, the sum of `min(|L|, |R|)` over the splits at which the point
    /// was still correctly classified. Empty when the builder saw no data.
    pub path_balance: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeBuild {
    pub tree: ThresholdTree,
    pub stats: BuildStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdTree {
    nodes: Vec<Node>,
    root: NodeId,
    k: usize,
    dim: usize,
    audit: Vec<SplitRecord>,
}

impl ThresholdTree {
    /// Assembles a tree from an arena, checking the structural invariants:
    /// a single rooted binary tree covering every node, `k` leaves naming each
    /// of `0..k` once, split dimensions below `dim`, finite thresholds.
    pub fn from_parts(nodes: Vec<Node>, root: NodeId, k: usize, dim: usize) -> Result<Self> {
        let tree = Self {
            nodes,
            root,
            k,
            dim,
            audit: Vec::new(),
        };
        tree.check_structure()?;
        Ok(tree)
    }

    pub fn single_leaf(dim: usize) -> Self {
        Self {
            nodes: vec![Node::Leaf { center: 0 }],
            root: NodeId(0),
            k: 1,
            dim,
            audit: Vec::new(),
        }
    }

    pub fn with_audit(mut self, audit: Vec<SplitRecord>) -> Self {
        self.audit = audit;
        self
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn audit(&self) -> &[SplitRecord] {
        &self.audit
    }

    pub fn split_count(&self) -> usize {
        self.nodes.len() - self.k
    }

    fn check_structure(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::MalformedTree(msg));
        if self.dim == 0 {
            return bad("dimension must be positive".into());
        }
        if self.k == 0 {
            return bad("tree must have at least one leaf".into());
        }
        if self.root.0 >= self.nodes.len() {
            return bad(format!("root {} out of range", self.root.0));
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut leaf_of_center = vec![false; self.k];
        let mut leaves = 0usize;
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            let Some(node) = self.nodes.get(id.0) else {
                return bad(format!("child {} out of range", id.0));
            };
            if std::mem::replace(&mut seen[id.0], true) {
                return bad(format!("node {} reachable twice", id.0));
            }
            match *node {
                Node::Leaf { center } => {
                    leaves += 1;
                    match leaf_of_center.get_mut(center) {
                        Some(slot) if !*slot => *slot = true,
                        Some(_) => return bad(format!("center {center} appears in two leaves")),
                        None => {
                            return bad(format!("leaf center {center} out of range 0..{}", self.k))
                        }
                    }
                }
                Node::Split {
                    dim,
                    threshold,
                    left,
                    right,
                } => {
                    if dim >= self.dim {
                        return bad(format!(
                            "node {} splits dimension {dim} >= {}",
                            id.0, self.dim
                        ));
                    }
                    if !threshold.is_finite() {
                        return bad(format!("node {} has non-finite threshold", id.0));
                    }
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        if leaves != self.k {
            return bad(format!("{leaves} leaves for k = {}", self.k));
        }
        if let Some(orphan) = seen.iter().position(|s| !s) {
            return bad(format!("node {orphan} is unreachable from the root"));
        }
        Ok(())
    }

    /// Checks the separation invariants against concrete centers: every split
    /// threshold lies strictly inside the box of the centers reaching it, and
    /// every leaf is reached by exactly the center it names.
    pub fn validate_against(&self, centers: &CenterSet) -> Result<()> {
        if centers.len() != self.k {
            return Err(Error::MalformedTree(format!(
                "tree has {} leaves but {} centers were supplied",
                self.k,
                centers.len()
            )));
        }
        centers.ensure_dim(self.dim)?;
        let reaching = self.centers_reaching(centers);
        for (id, node) in self.nodes.iter().enumerate() {
            let here = &reaching[id];
            match *node {
                Node::Leaf { center } => {
                    if here.as_slice() != [center] {
                        return Err(Error::MalformedTree(format!(
                            "leaf {id} names center {center} but is reached by {here:?}"
                        )));
                    }
                }
                Node::Split { dim, threshold, .. } => {
                    let (lo, hi) =
                        here.iter()
                            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
                                let v = centers.coord(i, dim);
                                (lo.min(v), hi.max(v))
                            });
                    if !(lo < threshold && threshold < hi) {
                        return Err(Error::MalformedTree(format!(
                            "split {id} threshold {threshold} not strictly inside [{lo}, {hi}]"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Centers reaching each node, indexed by node id.
    pub fn centers_reaching(&self, centers: &CenterSet) -> Vec<Vec<usize>> {
        let mut reaching = vec![Vec::new(); self.nodes.len()];
        for i in 0..centers.len() {
            let x = centers.get(i);
            let mut id = self.root;
            loop {
                reaching[id.0].push(i);
                match self.nodes[id.0] {
                    Node::Leaf { .. } => break,
                    Node::Split {
                        dim,
                        threshold,
                        left,
                        right,
                    } => {
                        id = match Side::of(x[dim], threshold) {
                            Side::Left => left,
                            Side::Right => right,
                        }
                    }
                }
            }
        }
        reaching
    }

    /// Leaf reached by `x`. Panics if `x` is shorter than the tree's dimension.
    #[inline]
    pub fn leaf_of(&self, x: &[f64]) -> NodeId {
        let mut id = self.root;
        loop {
            match self.nodes[id.0] {
                Node::Leaf { .. } => return id,
                Node::Split {
                    dim,
                    threshold,
                    left,
                    right,
                } => {
                    id = if x[dim] < threshold { left } else { right };
                }
            }
        }
    }

    /// Center index assigned to `x`; `O(height)` comparisons.
    pub fn assign(&self, x: &[f64]) -> Result<usize> {
        ensure_dim(self.dim, x.len())?;
        Ok(self.assign_unchecked(x))
    }

    #[inline]
    pub(crate) fn assign_unchecked(&self, x: &[f64]) -> usize {
        match self.nodes[self.leaf_of(x).0] {
            Node::Leaf { center } => center,
            Node::Split { .. } => unreachable!("leaf_of returns a leaf"),
        }
    }

    /// Leaf node naming each center.
    pub fn leaf_for_center(&self, center: usize) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| matches!(n, Node::Leaf { center: c } if *c == center))
            .map(NodeId)
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 0usize)];
        while let Some((id, depth)) = stack.pop() {
            match self.nodes[id.0] {
                Node::Leaf { .. } => best = best.max(depth),
                Node::Split { left, right, .. } => {
                    stack.push((left, depth + 1));
                    stack.push((right, depth + 1));
                }
            }
        }
        best
    }

    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parents = vec![None; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            if let Node::Split { left, right, .. } = *node {
                parents[left.0] = Some(NodeId(id));
                parents[right.0] = Some(NodeId(id));
            }
        }
        parents
    }

    /// Decisions on the path from the root to `target`, root first.
    pub fn path_to(&self, target: NodeId) -> Vec<Constraint> {
        let parents = self.parents();
        let mut path = Vec::new();
        let mut child = target;
        while let Some(parent) = parents[child.0] {
            if let Node::Split {
                dim,
                threshold,
                left,
                ..
            } = self.nodes[parent.0]
            {
                let side = if left == child {
                    Side::Left
                } else {
                    Side::Right
                };
                path.push(Constraint {
                    dim,
                    threshold,
                    side,
                });
            }
            child = parent;
        }
        path.reverse();
        path
    }
}

/// Arena used by the builders while a tree is grown top-down.
pub(crate) struct TreeAssembler {
    nodes: Vec<Option<Node>>,
    dim: usize,
}

impl TreeAssembler {
    pub(crate) fn new(dim: usize, capacity: usize) -> Self {
        Self {
            nodes: Vec::with_capacity(capacity),
            dim,
        }
    }

    pub(crate) fn reserve(&mut self) -> NodeId {
        self.nodes.push(None);
        NodeId(self.nodes.len() - 1)
    }

    pub(crate) fn set(&mut self, id: NodeId, node: Node) {
        debug_assert!(self.nodes[id.0].is_none());
        self.nodes[id.0] = Some(node);
    }

    pub(crate) fn finish(self, k: usize, audit: Vec<SplitRecord>) -> Result<ThresholdTree> {
        let nodes = self
            .nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.ok_or_else(|| Error::MalformedTree(format!("node {i} never filled"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ThresholdTree::from_parts(nodes, NodeId(0), k, self.dim)?.with_audit(audit))
    }
}
