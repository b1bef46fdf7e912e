//! Balanced binary tree over `n` leaf slots, nodes numbered in preorder so
//! every child index exceeds its parent's (the layout cascades expect).

use std::ops::Range;

use crate::scalar::{cmp, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    /// Leaf slots covered by the node.
    pub lo: usize,
    pub hi: usize,
    pub children: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct TreeShape {
    nodes: Vec<TreeNode>,
    leaves: usize,
}

impl TreeShape {
    /// `leaves >= 1`.
    pub fn new(leaves: usize) -> Self {
        assert!(leaves >= 1);
        let mut nodes = Vec::with_capacity(2 * leaves);
        fn build(nodes: &mut Vec<TreeNode>, lo: usize, hi: usize) -> usize {
            let id = nodes.len();
            nodes.push(TreeNode {
                lo,
                hi,
                children: None,
            });
            if hi - lo > 1 {
                let mid = lo + (hi - lo).div_ceil(2);
                let l = build(nodes, lo, mid);
                let r = build(nodes, mid, hi);
                nodes[id].children = Some((l, r));
            }
            id
        }
        build(&mut nodes, 0, leaves);
        Self { nodes, leaves }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn node(&self, v: usize) -> &TreeNode {
        &self.nodes[v]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn height(&self) -> usize {
        fn h(t: &TreeShape, v: usize) -> usize {
            match t.nodes[v].children {
                None => 1,
                Some((l, r)) => 1 + h(t, l).max(h(t, r)),
            }
        }
        h(self, 0)
    }

    /// Child lists in the form the cascade builder takes.
    pub fn child_lists(&self) -> Vec<Vec<usize>> {
        self.nodes
            .iter()
            .map(|n| n.children.map_or(Vec::new(), |(l, r)| vec![l, r]))
            .collect()
    }

    /// Canonical nodes whose leaf ranges partition `range`, left to right.
    pub fn canonical(&self, range: Range<usize>) -> Vec<usize> {
        let mut out = Vec::new();
        if range.start >= range.end {
            return out;
        }
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            let n = self.nodes[v];
            if range.start <= n.lo && n.hi <= range.end {
                out.push(v);
            } else if let Some((l, r)) = n.children {
                // right first so nodes come out left to right
                for child in [r, l] {
                    let c = self.nodes[child];
                    if c.lo < range.end && range.start < c.hi {
                        stack.push(child);
                    }
                }
            }
        }
        out
    }

    /// Root-to-leaf path for leaf slot `leaf`.
    pub fn path(&self, leaf: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut v = 0;
        while let Some((l, r)) = self.nodes[v].children {
            v = if leaf < self.nodes[l].hi { l } else { r };
            out.push(v);
        }
        out
    }
}

/// Elementary slabs of the line cut at a set of finite values: slab 0 is
/// `(-inf, v_0)`, slab `i` is `[v_{i-1}, v_i)`, the last one is unbounded.
#[derive(Debug, Clone)]
pub struct Slabs<S> {
    starts: Vec<S>,
}

impl<S: Scalar> Slabs<S> {
    pub fn new(values: impl IntoIterator<Item = S>) -> Self {
        let mut starts: Vec<S> = values.into_iter().filter(|v| v.is_finite()).collect();
        starts.sort_by(|a, b| cmp(*a, *b));
        starts.dedup();
        Self { starts }
    }

    pub fn count(&self) -> usize {
        self.starts.len() + 1
    }

    /// Number of comparisons a search costs.
    pub fn search_cost(&self) -> u64 {
        (usize::BITS - self.starts.len().leading_zeros()) as u64 + 1
    }

    pub fn of(&self, x: S) -> usize {
        self.starts.partition_point(|v| *v <= x)
    }

    /// Slabs covered by the half-open `[lo, hi)`, whose finite ends must be
    /// cut values.
    pub fn span(&self, lo: S, hi: S) -> Range<usize> {
        let b = if hi.is_finite() {
            self.of(hi)
        } else {
            self.count()
        };
        self.of(lo)..b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_partitions_range() {
        for n in 1..40 {
            let t = TreeShape::new(n);
            assert!(t
                .nodes()
                .iter()
                .enumerate()
                .all(|(i, nd)| nd.children.is_none_or(|(l, r)| l > i && r > i)));
            assert!(t.height() <= (n as f64).log2().ceil() as usize + 1);
            for a in 0..=n {
                for b in a..=n {
                    let c = t.canonical(a..b);
                    let mut covered = Vec::new();
                    for v in &c {
                        covered.extend(t.node(*v).lo..t.node(*v).hi);
                    }
                    assert_eq!(covered, (a..b).collect::<Vec<_>>());
                    assert!(c.len() <= 2 * t.height());
                }
            }
            for leaf in 0..n {
                let p = t.path(leaf);
                let last = t.node(*p.last().unwrap());
                assert_eq!((last.lo, last.hi), (leaf, leaf + 1));
            }
        }
    }
}
