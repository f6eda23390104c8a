//! Truncated half-infinite Cayley trees carrying a two-valued boundary field.
//!
//! Vertices are indexed breadth-first: the root is `0` and the `k` children
//! of `v` are `k v + 1 ..= k v + k`, so the vertices of a shallower tree are
//! a prefix of the deeper one and the leaves are always the last block.

mod measure;

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{check_theta, compat_raw, BoundaryMatrix, FieldVec};

pub use measure::{
    consistency_check, finite_volume_measure, Configuration, FiniteVolumeMeasure,
    DEFAULT_ENUMERATION_BUDGET,
};

pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedTree {
    k: usize,
    depth: usize,
    // level_start[m] is the index of the first vertex at distance m; one
    // extra entry holds the vertex count.
    level_start: Vec<usize>,
}

/// Tree of order `k` truncated at `depth`, with the default vertex cap.
pub fn build_tree(k: usize, depth: usize) -> Result<TruncatedTree> {
    TruncatedTree::with_cap(k, depth, DEFAULT_VERTEX_CAP)
}

impl TruncatedTree {
    pub fn with_cap(k: usize, depth: usize, cap: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("tree order k must be at least 1".into()));
        }
        let too_large = || Error::TreeTooLarge { k, depth, cap };
        let mut level_start = Vec::with_capacity(depth + 2);
        let (mut total, mut width) = (0usize, 1usize);
        for level in 0..=depth {
            level_start.push(total);
            total = total.checked_add(width).filter(|&t| t <= cap).ok_or_else(too_large)?;
            if level < depth {
                width = width.checked_mul(k).ok_or_else(too_large)?;
            }
        }
        level_start.push(total);
        Ok(Self { k, depth, level_start })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `|V_n|`.
    pub fn len(&self) -> usize {
        self.level_start[self.depth + 1]
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Vertex indices at distance `level` from the root (`W_level`).
    pub fn level_range(&self, level: usize) -> Range<usize> {
        self.level_start[level]..self.level_start[level + 1]
    }

    pub fn leaves(&self) -> Range<usize> {
        self.level_range(self.depth)
    }

    pub fn level(&self, v: usize) -> usize {
        self.level_start.partition_point(|&s| s <= v) - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v > 0).then(|| (v - 1) / self.k)
    }

    /// Direct successors `S(v)`; empty for leaves.
    pub fn children(&self, v: usize) -> Range<usize> {
        if self.is_leaf(v) {
            v..v
        } else {
            self.k * v + 1..self.k * v + self.k + 1
        }
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v >= self.level_start[self.depth]
    }

    /// The same tree cut at a smaller depth.
    pub fn truncate(&self, depth: usize) -> TruncatedTree {
        let depth = depth.min(self.depth);
        Self {
            k: self.k,
            depth,
            level_start: self.level_start[..depth + 2].to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    H,
    L,
}

/// Labels every vertex by the placement rule: an `H` vertex gives `H` to its
/// first `a` children and `L` to the remaining `b`; an `L` vertex gives `H`
/// to its first `c` and `L` to the remaining `d`.
pub fn assign_labels(tree: &TruncatedTree, m: &BoundaryMatrix, root_label: Label) -> Result<Vec<Label>> {
    m.check_order(tree.k())?;
    let mut labels = vec![Label::H; tree.len()];
    labels[0] = root_label;
    for v in 0..tree.len() {
        if tree.is_leaf(v) {
            break;
        }
        let heavy = match labels[v] {
            Label::H => m.a,
            Label::L => m.c,
        };
        for (i, child) in tree.children(v).enumerate() {
            labels[child] = if i < heavy { Label::H } else { Label::L };
        }
    }
    Ok(labels)
}

/// A labelled tree together with the two field values; serialises to the
/// exchange format `{k, depth, matrix, root_label, h_vec, l_vec, labels}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAssignment {
    pub k: usize,
    pub depth: usize,
    pub matrix: BoundaryMatrix,
    pub root_label: Label,
    pub h_vec: FieldVec,
    pub l_vec: FieldVec,
    pub labels: Vec<Label>,
}

impl BoundaryAssignment {
    pub fn new(
        tree: &TruncatedTree,
        matrix: BoundaryMatrix,
        root_label: Label,
        h_vec: FieldVec,
        l_vec: FieldVec,
    ) -> Result<Self> {
        if h_vec.len() != l_vec.len() || h_vec.is_empty() {
            return Err(Error::FieldLength {
                expected: h_vec.len().max(1),
                got: l_vec.len(),
            });
        }
        let labels = assign_labels(tree, &matrix, root_label)?;
        Ok(Self {
            k: tree.k(),
            depth: tree.depth(),
            matrix,
            root_label,
            h_vec,
            l_vec,
            labels,
        })
    }

    /// Field carried by vertex `v`.
    pub fn field(&self, v: usize) -> &FieldVec {
        match self.labels[v] {
            Label::H => &self.h_vec,
            Label::L => &self.l_vec,
        }
    }

    /// Number of spin states, `len(h_vec) + 1`.
    pub fn q(&self) -> usize {
        self.h_vec.len() + 1
    }

    /// The same assignment on the first `depth` levels.
    pub fn restrict(&self, tree: &TruncatedTree, depth: usize) -> Result<Self> {
        self.check_tree(tree)?;
        let small = tree.truncate(depth);
        Ok(Self {
            depth: small.depth(),
            labels: self.labels[..small.len()].to_vec(),
            ..self.clone()
        })
    }

    /// `H`/`L` counts per level.
    pub fn level_counts(&self, tree: &TruncatedTree) -> Vec<(usize, usize)> {
        (0..=tree.depth())
            .map(|lvl| {
                let h = self.labels[tree.level_range(lvl)]
                    .iter()
                    .filter(|&&l| l == Label::H)
                    .count();
                (h, tree.level_range(lvl).len() - h)
            })
            .collect()
    }

    pub(crate) fn check_tree(&self, tree: &TruncatedTree) -> Result<()> {
        if self.labels.len() != tree.len() || self.k != tree.k() {
            return Err(Error::LabelMismatch(format!(
                "assignment has {} labels for k = {}, tree has {} vertices for k = {}",
                self.labels.len(),
                self.k,
                tree.len(),
                tree.k()
            )));
        }
        Ok(())
    }

    /// Checks the placement rule at every non-leaf vertex.
    pub fn check_rule(&self, tree: &TruncatedTree) -> Result<()> {
        self.check_tree(tree)?;
        for v in (0..tree.len()).filter(|&v| !tree.is_leaf(v)) {
            let h = tree.children(v).filter(|&c| self.labels[c] == Label::H).count();
            let want = match self.labels[v] {
                Label::H => self.matrix.a,
                Label::L => self.matrix.c,
            };
            if h != want {
                return Err(Error::LabelMismatch(format!(
                    "vertex {v} has {h} H-children, expected {want}"
                )));
            }
        }
        Ok(())
    }
}

/// `max_x || h_x - sum_{y in S(x)} F(h_y, theta) ||_inf` over non-leaf `x`.
pub fn verify_compatibility(tree: &TruncatedTree, assignment: &BoundaryAssignment, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    assignment.check_tree(tree)?;
    let fh = compat_raw(assignment.h_vec.as_slice(), theta);
    let fl = compat_raw(assignment.l_vec.as_slice(), theta);
    let n = fh.len();
    let mut worst: f64 = 0.0;
    let mut sum = vec![0.0; n];
    for x in (0..tree.len()).filter(|&v| !tree.is_leaf(v)) {
        sum.iter_mut().for_each(|s| *s = 0.0);
        for y in tree.children(x) {
            let fy = match assignment.labels[y] {
                Label::H => &fh,
                Label::L => &fl,
            };
            sum.iter_mut().zip(fy).for_each(|(s, f)| *s += f);
        }
        let hx = assignment.field(x).as_slice();
        for (a, b) in hx.iter().zip(&sum) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}
