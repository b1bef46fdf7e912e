//! Histogram pdfs, intervals with one infinite side.
//!
//! Every cdf is a chain of segments over the whole line (rays at heights 0
//! and 1 at the ends). For `(-inf, x]` the probabilities are the heights of
//! the segments crossing the vertical line at `x`; `[x, +inf)` uses the
//! segments of `1 - F_p`. Top-1 reads the upper envelope of all chains,
//! top-k and threshold go through the segments-above-point structure.

pub mod stabbing;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::{Line, SegmentEnvelope};
use crate::halfplane::{multi_topk, Engine};
use crate::model::{IntervalKind, QueryInterval, UncertainPoint};
use crate::query::{
    check_k, check_tau, complete_topk, full_interval_topk, height_slack, Hit, PointTable,
    RangeIndex,
};
use crate::scalar::Scalar;

pub use stabbing::{Segment, SegmentAbovePointIndex};

/// The envelope and the stabbing structure for one orientation.
#[derive(Debug, Clone)]
pub struct Side<S> {
    pub envelope: SegmentEnvelope<S>,
    pub segments: SegmentAbovePointIndex<S>,
}

#[derive(Debug, Clone)]
pub struct HistogramUnboundedIndex<S> {
    table: PointTable<S>,
    /// `F_p`, queried at `x_r` when `x_l = -inf`.
    left: Side<S>,
    /// `1 - F_p`, queried at `x_l` when `x_r = +inf`.
    right: Side<S>,
    slack: S,
}

/// Cdf pieces of `p` as segments, tagged by piece index; `mirror` gives the
/// pieces of `1 - F_p`.
pub fn cdf_segments<S: Scalar>(p: &UncertainPoint<S>, mirror: bool) -> Vec<Segment<S>> {
    p.cdf()
        .pieces()
        .enumerate()
        .map(|(t, q)| {
            let (slope, intercept) = if mirror {
                (-q.slope, S::one() - q.intercept)
            } else {
                (q.slope, q.intercept)
            };
            Segment {
                lo: q.lo,
                hi: q.hi,
                line: Line {
                    slope,
                    intercept,
                    owner: p.id,
                    tag: t as u32,
                },
            }
        })
        .collect()
}

impl<S: Scalar> Side<S> {
    fn build(table: &PointTable<S>, mirror: bool) -> Result<(Self, Vec<Line<S>>)> {
        let chains: Vec<Vec<Segment<S>>> = table
            .points()
            .iter()
            .map(|p| cdf_segments(p, mirror))
            .collect();
        let envelope = SegmentEnvelope::build(
            chains
                .iter()
                .map(|ch| ch.iter().map(|s| (s.lo, s.line)).collect())
                .collect(),
        );
        let flat: Vec<Segment<S>> = chains.into_iter().flatten().collect();
        let segments = SegmentAbovePointIndex::build(&flat)?;
        Ok((
            Self { envelope, segments },
            flat.iter().map(|s| s.line).collect(),
        ))
    }
}

impl<S: Scalar> HistogramUnboundedIndex<S> {
    pub fn build(points: Vec<UncertainPoint<S>>) -> Result<Self> {
        let table = PointTable::new(points)?;
        let (left, l_lines) = Side::build(&table, false)?;
        let (right, r_lines) = Side::build(&table, true)?;
        let range = table.coordinate_range();
        let slack = height_slack(&l_lines, range).max(height_slack(&r_lines, range));
        Ok(Self {
            table,
            left,
            right,
            slack,
        })
    }

    pub fn left_side(&self) -> &Side<S> {
        &self.left
    }

    pub fn right_side(&self) -> &Side<S> {
        &self.right
    }

    fn side(&self, interval: &QueryInterval<S>) -> Result<Option<(&Side<S>, S)>> {
        match interval.kind() {
            IntervalKind::LeftUnbounded => Ok(Some((&self.left, interval.hi))),
            IntervalKind::RightUnbounded => Ok(Some((&self.right, interval.lo))),
            IntervalKind::Full => Ok(None),
            IntervalKind::Bounded => Err(Error::BoundedInterval),
        }
    }
}

impl<S: Scalar> RangeIndex<S> for HistogramUnboundedIndex<S> {
    fn len(&self) -> usize {
        self.table.len()
    }

    fn supports(&self, kind: IntervalKind) -> bool {
        kind != IntervalKind::Bounded
    }

    fn top1(&self, interval: &QueryInterval<S>, c: &mut Counters) -> Result<Hit<S>> {
        let Some((side, x)) = self.side(interval)? else {
            return Ok(full_interval_topk(&self.table, 1)[0]);
        };
        let best = self.table.hit(side.envelope.locate(x, c).owner, interval);
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
        let Some((side, x)) = self.side(interval)? else {
            return Ok(full_interval_topk(&self.table, k));
        };
        let mut sources = side.segments.sources(x, c);
        let found = multi_topk(&mut sources, k, engine, c)?;
        let mut cand = self
            .table
            .exact(found.iter().map(|h| h.line.owner), interval, S::zero());
        // one segment per cdf crosses x, so the k lines have k distinct owners
        debug_assert_eq!(cand.len(), k);
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
        let side = self.side(interval)?;
        if tau == S::zero() {
            return Ok(self.table.all(interval));
        }
        let Some((side, x)) = side else {
            return Ok(self.table.all(interval));
        };
        let mut found = Vec::new();
        for src in side.segments.sources(x, c) {
            src.index
                .report_above_into(src.walk, tau - self.slack, &mut found, c);
        }
        Ok(self
            .table
            .exact(found.iter().map(|h| h.line.owner), interval, tau))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> HistogramUnboundedIndex<f64> {
        let pts = vec![
            UncertainPoint::histogram(1, vec![0.0, 1.0, 3.0], vec![0.5, 0.25]).unwrap(),
            UncertainPoint::histogram(2, vec![2.0, 4.0], vec![0.5]).unwrap(),
            UncertainPoint::histogram(3, vec![0.0, 2.0, 5.0, 6.0], vec![0.25, 0.0, 0.5]).unwrap(),
        ];
        HistogramUnboundedIndex::build(pts).unwrap()
    }

    fn iv(lo: f64, hi: f64) -> QueryInterval<f64> {
        QueryInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn d2_queries() {
        let idx = d2();
        let mut c = Counters::default();
        let inf = f64::INFINITY;
        assert_eq!(
            idx.top1(&iv(-inf, 2.5), &mut c).unwrap(),
            Hit { id: 1, prob: 0.875 }
        );
        assert_eq!(
            idx.top1(&iv(2.5, inf), &mut c).unwrap(),
            Hit { id: 2, prob: 0.75 }
        );
        assert_eq!(
            idx.top1(&iv(-inf, inf), &mut c).unwrap(),
            Hit { id: 1, prob: 1.0 }
        );
        let ids = |v: Vec<Hit<f64>>| v.iter().map(|h| h.id).collect::<Vec<_>>();
        assert_eq!(
            ids(idx.threshold(&iv(-inf, 2.5), 0.3, &mut c).unwrap()),
            vec![1, 3]
        );
        assert_eq!(
            ids(idx.threshold(&iv(-inf, 0.4), 0.2, &mut c).unwrap()),
            vec![1]
        );
        assert_eq!(idx.threshold(&iv(-inf, 0.4), 0.0, &mut c).unwrap().len(), 3);
        for e in Engine::ALL {
            let got: Vec<(u64, f64)> = idx
                .topk(&iv(-inf, 2.5), 2, e, &mut c)
                .unwrap()
                .iter()
                .map(|h| (h.id, h.prob))
                .collect();
            assert_eq!(got, vec![(1, 0.875), (3, 0.5)]);
        }
        assert_eq!(
            idx.top1(&iv(1.0, 2.0), &mut c).unwrap_err(),
            Error::BoundedInterval
        );
    }

    #[test]
    fn single_point() {
        let p = UncertainPoint::histogram(4, vec![0.0, 1.0], vec![1.0]).unwrap();
        let idx = HistogramUnboundedIndex::build(vec![p]).unwrap();
        let mut c = Counters::default();
        assert_eq!(
            idx.top1(
                &QueryInterval::new(f64::NEG_INFINITY, 0.25).unwrap(),
                &mut c
            )
            .unwrap(),
            Hit { id: 4, prob: 0.25 }
        );
    }
}
