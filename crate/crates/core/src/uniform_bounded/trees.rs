//! Range-restricted structures over points in a fixed order: half-plane
//! indexes per tree node with a cascade across their entry catalogs, the
//! width-ordered node lists used for intervals strictly inside supports, and
//! the dominance-minimum search.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::Range;

use crate::counters::Counters;
use crate::error::Result;
use crate::geom::{Cursor, FractionalCascade, Line, TreeShape};
use crate::halfplane::{LayeredHalfplaneIndex, SortedStream, Source};
use crate::model::PointId;
use crate::scalar::{cmp, Scalar};

/// A half-plane index per node of a balanced tree over a line sequence.
#[derive(Debug, Clone)]
pub struct EnvelopeTree<S> {
    shape: TreeShape,
    nodes: Vec<LayeredHalfplaneIndex<S>>,
    cascade: FractionalCascade<S>,
}

impl<S: Scalar> EnvelopeTree<S> {
    /// `lines[i]` sits at leaf slot `i`.
    pub fn build(lines: &[Line<S>]) -> Result<Self> {
        let shape = TreeShape::new(lines.len().max(1));
        let nodes = shape
            .nodes()
            .iter()
            .map(|n| LayeredHalfplaneIndex::build(&lines[n.lo..n.hi]))
            .collect::<Result<Vec<_>>>()?;
        let catalogs = nodes.iter().map(|d| d.entry_catalog().to_vec()).collect();
        let cascade = FractionalCascade::build(catalogs, &shape.child_lists());
        Ok(Self {
            shape,
            nodes,
            cascade,
        })
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn node_index(&self, v: usize) -> &LayeredHalfplaneIndex<S> {
        &self.nodes[v]
    }

    /// Canonical node indexes covering `range`, each positioned at `x`. One
    /// binary search at the root; bridges everywhere else.
    pub fn sources(&self, range: Range<usize>, x: S, c: &mut Counters) -> Vec<Source<'_, S>> {
        let mut out = Vec::new();
        if range.start < range.end {
            let root = self.cascade.locate(0, x, c);
            self.collect(0, root, &range, x, c, &mut out);
        }
        out
    }

    fn collect<'a>(
        &'a self,
        v: usize,
        cur: Cursor,
        range: &Range<usize>,
        x: S,
        c: &mut Counters,
        out: &mut Vec<Source<'a, S>>,
    ) {
        let n = self.shape.node(v);
        if range.start <= n.lo && n.hi <= range.end {
            let index = &self.nodes[v];
            out.push(Source {
                index,
                walk: index.walk_from(self.cascade.own_rank(cur), x),
            });
            return;
        }
        if let Some((l, r)) = n.children {
            for (slot, child) in [(0, l), (1, r)] {
                let cn = self.shape.node(child);
                if cn.lo < range.end && range.start < cn.hi {
                    let next = self.cascade.descend(cur, slot, x, c);
                    self.collect(child, next, range, x, c, out);
                }
            }
        }
    }
}

/// Range-minimum over `(width, id)` pairs.
#[derive(Debug, Clone)]
struct SparseMin<S> {
    keys: Vec<(S, PointId)>,
    table: Vec<Vec<u32>>,
}

fn key_less<S: Scalar>(a: &(S, PointId), b: &(S, PointId)) -> bool {
    cmp(a.0, b.0).then(a.1.cmp(&b.1)) == Ordering::Less
}

impl<S: Scalar> SparseMin<S> {
    fn new(keys: Vec<(S, PointId)>) -> Self {
        let n = keys.len();
        let mut table = vec![(0..n as u32).collect::<Vec<_>>()];
        let mut span = 1;
        while 2 * span <= n {
            let prev = table.last().unwrap();
            let row = (0..=n - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if key_less(&keys[b as usize], &keys[a as usize]) {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            table.push(row);
            span *= 2;
        }
        Self { keys, table }
    }

    /// Position of the minimum in `a..b` (non-empty).
    fn argmin(&self, a: usize, b: usize) -> usize {
        let level = (usize::BITS - 1 - (b - a).leading_zeros()) as usize;
        let (x, y) = (self.table[level][a], self.table[level][b - (1 << level)]);
        if key_less(&self.keys[y as usize], &self.keys[x as usize]) {
            y as usize
        } else {
            x as usize
        }
    }
}

/// Node members sorted by right endpoint with widths.
#[derive(Debug, Clone)]
struct WidthNode<S> {
    hi: Vec<S>,
    min: SparseMin<S>,
}

/// Per tree node over a left-endpoint order: given `x_r`, lists the members
/// with right endpoint `> x_r` by increasing width.
#[derive(Debug, Clone)]
pub struct ZOrderTree<S> {
    shape: TreeShape,
    nodes: Vec<WidthNode<S>>,
}

/// `(lo, hi, id)` of a uniform support.
pub type Support<S> = (S, S, PointId);

impl<S: Scalar> ZOrderTree<S> {
    /// `supports[i]` sits at leaf slot `i`.
    pub fn build(supports: &[Support<S>]) -> Self {
        let shape = TreeShape::new(supports.len().max(1));
        let nodes = shape
            .nodes()
            .iter()
            .map(|n| {
                let mut m: Vec<Support<S>> = supports[n.lo..n.hi].to_vec();
                m.sort_by(|a, b| cmp(a.1, b.1).then(a.2.cmp(&b.2)));
                WidthNode {
                    hi: m.iter().map(|s| s.1).collect(),
                    min: SparseMin::new(m.iter().map(|s| (s.1 - s.0, s.2)).collect()),
                }
            })
            .collect();
        Self { shape, nodes }
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    /// One stream per canonical node of `range`, restricted to `hi > x_r`.
    pub fn streams(
        &self,
        range: Range<usize>,
        x_r: S,
        c: &mut Counters,
    ) -> Vec<WidthStream<'_, S>> {
        self.shape
            .canonical(range)
            .into_iter()
            .map(|v| {
                let node = &self.nodes[v];
                c.comparisons += (usize::BITS - node.hi.len().leading_zeros()) as u64 + 1;
                let start = node.hi.partition_point(|h| *h <= x_r);
                WidthStream::new(node, start)
            })
            .filter(|s| !s.is_empty())
            .collect()
    }
}

/// Members of one node with `hi > x_r`, by increasing `(width, id)`. Values
/// are negated widths so the stream is descending.
pub struct WidthStream<'a, S> {
    node: &'a WidthNode<S>,
    len: usize,
    heap: BinaryHeap<Pending<S>>,
    out: Vec<(S, PointId)>,
}

/// Pending sub-range with its minimum, ordered for a max-heap on smallness.
struct Pending<S> {
    key: (S, PointId),
    at: usize,
    lo: usize,
    hi: usize,
}

impl<S: Scalar> PartialEq for Pending<S> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<S: Scalar> Eq for Pending<S> {}
impl<S: Scalar> PartialOrd for Pending<S> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<S: Scalar> Ord for Pending<S> {
    fn cmp(&self, o: &Self) -> Ordering {
        cmp(o.key.0, self.key.0).then(o.key.1.cmp(&self.key.1))
    }
}

impl<'a, S: Scalar> WidthStream<'a, S> {
    fn new(node: &'a WidthNode<S>, start: usize) -> Self {
        let mut s = Self {
            node,
            len: node.hi.len() - start,
            heap: BinaryHeap::new(),
            out: Vec::new(),
        };
        s.push(start, node.hi.len());
        s
    }

    fn push(&mut self, lo: usize, hi: usize) {
        if lo < hi {
            let at = self.node.min.argmin(lo, hi);
            self.heap.push(Pending {
                key: self.node.min.keys[at],
                at,
                lo,
                hi,
            });
        }
    }

    /// `(width, id)` of the `i`-th narrowest member.
    pub fn item(&mut self, i: usize, c: &mut Counters) -> (S, PointId) {
        while self.out.len() <= i {
            let r = self.heap.pop().expect("item within length");
            c.heap_ops += 2;
            self.out.push(r.key);
            self.push(r.lo, r.at);
            self.push(r.at + 1, r.hi);
        }
        self.out[i]
    }
}

impl<S: Scalar> SortedStream<S> for WidthStream<'_, S> {
    fn len(&self) -> usize {
        self.len
    }
    fn get(&mut self, i: usize, c: &mut Counters) -> S {
        -self.item(i, c).0
    }
}

/// Members of a node by `hi` descending, with prefix minima of `(width, id)`.
type HiPrefix<S> = (Vec<S>, Vec<(S, PointId)>);

/// Minimum width over supports with `lo < x_l` and `hi > x_r`.
#[derive(Debug, Clone)]
pub struct DominanceMinIndex<S> {
    lo: Vec<S>,
    shape: TreeShape,
    nodes: Vec<HiPrefix<S>>,
}

impl<S: Scalar> DominanceMinIndex<S> {
    pub fn build(supports: &[Support<S>]) -> Self {
        let mut sorted = supports.to_vec();
        sorted.sort_by(|a, b| cmp(a.0, b.0).then(a.2.cmp(&b.2)));
        let shape = TreeShape::new(sorted.len().max(1));
        let nodes = shape
            .nodes()
            .iter()
            .map(|n| {
                let mut m: Vec<Support<S>> = sorted[n.lo..n.hi.min(sorted.len())].to_vec();
                m.sort_by(|a, b| cmp(b.1, a.1).then(a.2.cmp(&b.2)));
                let mut best: Option<(S, PointId)> = None;
                let prefix = m
                    .iter()
                    .map(|s| {
                        let k = (s.1 - s.0, s.2);
                        if best.is_none_or(|b| key_less(&k, &b)) {
                            best = Some(k);
                        }
                        best.unwrap()
                    })
                    .collect();
                (m.iter().map(|s| s.1).collect(), prefix)
            })
            .collect();
        Self {
            lo: sorted.iter().map(|s| s.0).collect(),
            shape,
            nodes,
        }
    }

    /// `(width, id)` of the narrowest support strictly containing `[x_l, x_r]`.
    pub fn query(&self, x_l: S, x_r: S, c: &mut Counters) -> Option<(S, PointId)> {
        let s = self.lo.partition_point(|l| *l < x_l);
        let mut best: Option<(S, PointId)> = None;
        for v in self.shape.canonical(0..s) {
            let (his, prefix) = &self.nodes[v];
            c.comparisons += (usize::BITS - his.len().leading_zeros()) as u64 + 1;
            let cnt = his.partition_point(|h| *h > x_r);
            if cnt > 0 && best.is_none_or(|b| key_less(&prefix[cnt - 1], &b)) {
                best = Some(prefix[cnt - 1]);
            }
        }
        best
    }
}
