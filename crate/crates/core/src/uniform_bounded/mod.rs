//! Uniform pdfs, bounded query intervals.
//!
//! Relative to `I = [x_l, x_r]` a support `[lo, hi]` is of type L
//! (`x_l <= lo`, probability `F_p(x_r)`), R (`hi <= x_r`, probability
//! `1 - F_p(x_l)`) or M (`lo < x_l` and `hi > x_r`, probability
//! `(x_r - x_l) / (hi - lo)`). L points form a suffix of the order by `lo`,
//! R points a prefix of the order by `hi`, and M points a prefix of the `lo`
//! order filtered by `hi > x_r`. Each family has its own structures:
//!
//! * top-1: persistent suffix envelopes for L and R, dominance minimum on
//!   width for M;
//! * top-k and threshold: a tree of half-plane indexes for L and for R and a
//!   tree of width-ordered lists for M.

pub mod trees;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::{Line, PersistentEnvelopeSequence};
use crate::halfplane::{
    block_heap_topk, default_block, heap_merge_topk, multi_topk, select_merge_topk, Engine,
    SortedStream,
};
use crate::model::{IntervalKind, PointId, QueryInterval, UncertainPoint};
use crate::query::{
    check_k, check_tau, complete_topk, height_slack, result_order, Hit, PointTable, RangeIndex,
};
use crate::scalar::{cmp, Scalar};
use crate::uniform_unbounded::uniform_lines;

pub use trees::{DominanceMinIndex, EnvelopeTree, Support, WidthStream, ZOrderTree};

#[derive(Debug, Clone)]
pub struct UniformBoundedIndex<S> {
    table: PointTable<S>,
    /// Left endpoints ascending (ties by id) and the matching lines.
    by_lo: Vec<S>,
    /// Right endpoints ascending (ties by id).
    by_hi: Vec<S>,
    /// Version `s`: envelope of the cdf lines of `by_lo[s..]`.
    l_seq: PersistentEnvelopeSequence<S>,
    /// Version `n - e`: envelope of the mirrored lines of `by_hi[..e]`.
    r_seq: PersistentEnvelopeSequence<S>,
    dominance: DominanceMinIndex<S>,
    t_l: EnvelopeTree<S>,
    t_r: EnvelopeTree<S>,
    t_m: ZOrderTree<S>,
    slack: S,
}

impl<S: Scalar> UniformBoundedIndex<S> {
    pub fn build(points: Vec<UncertainPoint<S>>) -> Result<Self> {
        let table = PointTable::new(points)?;
        let mut items: Vec<(Support<S>, Line<S>, Line<S>)> = Vec::with_capacity(table.len());
        for p in table.points() {
            let u = p.as_uniform().ok_or(Error::NonUniformPoint(p.id))?;
            let (l, r) = uniform_lines(p)?;
            items.push(((u.lo, u.hi, p.id), l, r));
        }
        items.sort_by(|a, b| cmp(a.0 .0, b.0 .0).then(a.0 .2.cmp(&b.0 .2)));
        let by_lo: Vec<S> = items.iter().map(|i| i.0 .0).collect();
        let lo_lines: Vec<Line<S>> = items.iter().map(|i| i.1).collect();
        let lo_supports: Vec<Support<S>> = items.iter().map(|i| i.0).collect();
        let l_seq = PersistentEnvelopeSequence::build(&lo_lines);
        let t_l = EnvelopeTree::build(&lo_lines)?;
        let t_m = ZOrderTree::build(&lo_supports);
        let dominance = DominanceMinIndex::build(&lo_supports);

        items.sort_by(|a, b| cmp(a.0 .1, b.0 .1).then(a.0 .2.cmp(&b.0 .2)));
        let by_hi: Vec<S> = items.iter().map(|i| i.0 .1).collect();
        let hi_lines: Vec<Line<S>> = items.iter().map(|i| i.2).collect();
        let reversed: Vec<Line<S>> = hi_lines.iter().rev().copied().collect();
        let r_seq = PersistentEnvelopeSequence::build(&reversed);
        let t_r = EnvelopeTree::build(&hi_lines)?;

        let range = table.coordinate_range();
        let slack = height_slack(&lo_lines, range).max(height_slack(&hi_lines, range));
        Ok(Self {
            table,
            by_lo,
            by_hi,
            l_seq,
            r_seq,
            dominance,
            t_l,
            t_r,
            t_m,
            slack,
        })
    }

    pub fn l_sequence(&self) -> &PersistentEnvelopeSequence<S> {
        &self.l_seq
    }

    pub fn r_sequence(&self) -> &PersistentEnvelopeSequence<S> {
        &self.r_seq
    }

    pub fn dominance(&self) -> &DominanceMinIndex<S> {
        &self.dominance
    }

    pub fn left_tree(&self) -> &EnvelopeTree<S> {
        &self.t_l
    }

    pub fn right_tree(&self) -> &EnvelopeTree<S> {
        &self.t_r
    }

    pub fn middle_tree(&self) -> &ZOrderTree<S> {
        &self.t_m
    }

    /// `(s, e)`: L points are `by_lo[s..]`, R points `by_hi[..e]`, M
    /// candidates `by_lo[..s]`.
    fn split(&self, interval: &QueryInterval<S>, c: &mut Counters) -> Result<(usize, usize)> {
        if !interval.is_bounded() {
            return Err(Error::UnboundedInterval);
        }
        c.comparisons += 2 * ((usize::BITS - self.by_lo.len().leading_zeros()) as u64 + 1);
        Ok((
            self.by_lo.partition_point(|l| *l < interval.lo),
            self.by_hi.partition_point(|h| *h <= interval.hi),
        ))
    }

    fn m_topk(
        &self,
        s: usize,
        x_r: S,
        k: usize,
        engine: Engine,
        c: &mut Counters,
    ) -> Result<Vec<PointId>> {
        let mut streams = self.t_m.streams(0..s, x_r, c);
        let total: usize = streams.iter().map(|s| s.len()).sum();
        let k = k.min(total);
        if k == 0 {
            return Ok(Vec::new());
        }
        let picks = match engine {
            Engine::Heap => heap_merge_topk(&mut streams, k, c)?,
            Engine::Select => select_merge_topk(&mut streams, k, c)?,
            Engine::Block => block_heap_topk(&mut streams, k, default_block(self.len()), c)?,
        };
        Ok(picks
            .iter()
            .map(|p| streams[p.stream].item(p.pos, c).1)
            .collect())
    }
}

impl<S: Scalar> RangeIndex<S> for UniformBoundedIndex<S> {
    fn len(&self) -> usize {
        self.table.len()
    }

    fn supports(&self, kind: IntervalKind) -> bool {
        kind == IntervalKind::Bounded
    }

    fn top1(&self, interval: &QueryInterval<S>, c: &mut Counters) -> Result<Hit<S>> {
        let (s, e) = self.split(interval, c)?;
        let n = self.len();
        let mut ids: Vec<PointId> = Vec::with_capacity(3);
        if s < n {
            ids.extend(self.l_seq.locate(s, interval.hi, c).map(|l| l.owner));
        }
        if e > 0 {
            ids.extend(self.r_seq.locate(n - e, interval.lo, c).map(|l| l.owner));
        }
        ids.extend(
            self.dominance
                .query(interval.lo, interval.hi, c)
                .map(|d| d.1),
        );
        let best = self.table.exact(ids, interval, S::zero())[0];
        Ok(complete_topk(1, vec![best], c, |t, c| self.threshold(interval, t, c))?[0])
    }

    fn topk(
        &self,
        interval: &QueryInterval<S>,
        k: usize,
        engine: Engine,
        c: &mut Counters,
    ) -> Result<Vec<Hit<S>>> {
        check_k(k, self.len())?;
        let (s, e) = self.split(interval, c)?;
        let n = self.len();
        let mut ids: Vec<PointId> = Vec::with_capacity(3 * k);
        let mut l_src = self.t_l.sources(s..n, interval.hi, c);
        ids.extend(
            multi_topk(&mut l_src, k, engine, c)?
                .iter()
                .map(|h| h.line.owner),
        );
        let mut r_src = self.t_r.sources(0..e, interval.lo, c);
        ids.extend(
            multi_topk(&mut r_src, k, engine, c)?
                .iter()
                .map(|h| h.line.owner),
        );
        ids.extend(self.m_topk(s, interval.hi, k, engine, c)?);
        let mut cand = self.table.exact(ids, interval, S::zero());
        cand.truncate(k);
        complete_topk(k, cand, c, |t, c| self.threshold(interval, t, c))
    }

    fn threshold(
        &self,
        interval: &QueryInterval<S>,
        tau: S,
        c: &mut Counters,
    ) -> Result<Vec<Hit<S>>> {
        check_tau(tau)?;
        let (s, e) = self.split(interval, c)?;
        if tau == S::zero() {
            return Ok(self.table.all(interval));
        }
        let n = self.len();
        let y = tau - self.slack;
        let mut found = Vec::new();
        for src in self.t_l.sources(s..n, interval.hi, c) {
            src.index.report_above_into(src.walk, y, &mut found, c);
        }
        for src in self.t_r.sources(0..e, interval.lo, c) {
            src.index.report_above_into(src.walk, y, &mut found, c);
        }
        let mut ids: Vec<PointId> = found.iter().map(|h| h.line.owner).collect();
        if y > S::zero() {
            // widths up to (x_r - x_l) / y reach probability y
            let max_w = (interval.hi - interval.lo) / y;
            for mut st in self.t_m.streams(0..s, interval.hi, c) {
                for i in 0..st.len() {
                    let (w, id) = st.item(i, c);
                    c.comparisons += 1;
                    if w > max_w {
                        break;
                    }
                    ids.push(id);
                    c.reported += 1;
                }
            }
        } else {
            for mut st in self.t_m.streams(0..s, interval.hi, c) {
                ids.extend((0..st.len()).map(|i| st.item(i, c).1));
            }
        }
        let mut hits = self.table.exact(ids, interval, tau);
        hits.sort_by(result_order);
        Ok(hits)
    }
}
