//! Segments above a query point: a segment tree over the elementary slabs of
//! all segment endpoints, with the supporting lines of the segments assigned
//! to each node kept in a half-plane index. The nodes on the root-to-leaf
//! path of `x` hold exactly the segments whose extent contains `x`.

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::{FractionalCascade, Line, Slabs, TreeShape};
use crate::halfplane::{LayeredHalfplaneIndex, Source};
use crate::scalar::Scalar;

/// Half-open `[lo, hi)` piece of `line`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<S> {
    pub lo: S,
    pub hi: S,
    pub line: Line<S>,
}

#[derive(Debug, Clone)]
pub struct SegmentAbovePointIndex<S> {
    /// Cut at every finite segment endpoint.
    slabs: Slabs<S>,
    shape: TreeShape,
    nodes: Vec<Option<LayeredHalfplaneIndex<S>>>,
    cascade: FractionalCascade<S>,
    /// Number of nodes each input segment was assigned to.
    copies: Vec<u32>,
}

impl<S: Scalar> SegmentAbovePointIndex<S> {
    pub fn build(segments: &[Segment<S>]) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyInput);
        }
        let slabs = Slabs::new(segments.iter().flat_map(|s| [s.lo, s.hi]));
        let shape = TreeShape::new(slabs.count());
        let mut assigned: Vec<Vec<Line<S>>> = vec![Vec::new(); shape.len()];
        let mut copies = Vec::with_capacity(segments.len());
        for s in segments {
            let canon = shape.canonical(slabs.span(s.lo, s.hi));
            copies.push(canon.len() as u32);
            for v in canon {
                assigned[v].push(s.line);
            }
        }
        let nodes: Vec<Option<LayeredHalfplaneIndex<S>>> = assigned
            .iter()
            .map(|ls| {
                if ls.is_empty() {
                    Ok(None)
                } else {
                    LayeredHalfplaneIndex::build(ls).map(Some)
                }
            })
            .collect::<Result<_>>()?;
        let catalogs = nodes
            .iter()
            .map(|d| {
                d.as_ref()
                    .map_or(Vec::new(), |d| d.entry_catalog().to_vec())
            })
            .collect();
        let cascade = FractionalCascade::build(catalogs, &shape.child_lists());
        Ok(Self {
            slabs,
            shape,
            nodes,
            cascade,
            copies,
        })
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn slab_count(&self) -> usize {
        self.slabs.count()
    }

    /// Tree nodes holding each input segment, in input order.
    pub fn copies(&self) -> &[u32] {
        &self.copies
    }

    pub fn slab_of(&self, x: S) -> usize {
        self.slabs.of(x)
    }

    /// Non-empty node indexes on the path of `x`, each positioned at `x`:
    /// one binary search at the root, bridges below.
    pub fn sources(&self, x: S, c: &mut Counters) -> Vec<Source<'_, S>> {
        c.comparisons += self.slabs.search_cost();
        let leaf = self.slab_of(x);
        let mut out = Vec::new();
        let mut v = 0;
        let mut cur = self.cascade.locate(0, x, c);
        loop {
            if let Some(index) = &self.nodes[v] {
                out.push(Source {
                    index,
                    walk: index.walk_from(self.cascade.own_rank(cur), x),
                });
            }
            let Some((l, r)) = self.shape.node(v).children else {
                break;
            };
            let (slot, child) = if leaf < self.shape.node(l).hi {
                (0, l)
            } else {
                (1, r)
            };
            cur = self.cascade.descend(cur, slot, x, c);
            v = child;
        }
        out
    }

    /// Every line stored on the path of `x` (for checks).
    pub fn path_lines(&self, x: S) -> Vec<Line<S>> {
        let leaf = self.slab_of(x);
        self.shape
            .path(leaf)
            .into_iter()
            .filter_map(|v| self.nodes[v].as_ref())
            .flat_map(|d| {
                d.layers()
                    .iter()
                    .flat_map(|l| l.lines().iter().copied())
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}
