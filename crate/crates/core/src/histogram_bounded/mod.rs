//! Histogram pdfs, bounded query intervals.
//!
//! A query `[x_l, x_r]` is the point `(x_l, x_r)` in the plane, and each
//! point's probability there is the height of one of its piece-pair planes.
//! The canonical tree hands out `O(log^2)` sets holding exactly one plane per
//! point. Top-1 locates the highest plane of each set, top-k runs prefix
//! doubling over the sets, threshold scans the sets whose envelope reaches
//! the threshold.

pub mod canonical;
pub mod doubling;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::Line;
use crate::halfplane::Engine;
use crate::model::{IntervalKind, PointId, QueryInterval, UncertainPoint};
use crate::query::{check_k, check_tau, complete_topk, height_slack, Hit, PointTable, RangeIndex};
use crate::scalar::Scalar;

pub use canonical::{pair_planes, CanonicalPlaneSet, CanonicalTree, PairPlane};
pub use doubling::{base_prefix, doubling_topk, DoublingOutcome};

#[derive(Debug, Clone)]
pub struct HistogramBoundedIndex<S> {
    table: PointTable<S>,
    tree: CanonicalTree<S>,
    slack: S,
}

impl<S: Scalar> HistogramBoundedIndex<S> {
    pub fn build(points: Vec<UncertainPoint<S>>) -> Result<Self> {
        let table = PointTable::new(points)?;
        let tree = CanonicalTree::build(table.points())?;
        let lines: Vec<Line<S>> = table
            .points()
            .iter()
            .flat_map(|p| {
                p.cdf()
                    .pieces()
                    .map(|q| Line::new(q.slope, q.intercept, p.id))
                    .collect::<Vec<_>>()
            })
            .collect();
        // a plane value is the difference of two line heights
        let slack = height_slack(&lines, table.coordinate_range()) * S::lit(2.0);
        Ok(Self { table, tree, slack })
    }

    pub fn tree(&self) -> &CanonicalTree<S> {
        &self.tree
    }

    /// The canonical sets for a bounded interval. In debug builds checks that
    /// they hold exactly one plane per point.
    pub fn canonical_sets(
        &self,
        interval: &QueryInterval<S>,
        c: &mut Counters,
    ) -> Result<Vec<&CanonicalPlaneSet<S>>> {
        if !interval.is_bounded() {
            return Err(Error::UnboundedInterval);
        }
        let family = self.tree.family(interval.lo, interval.hi, c);
        #[cfg(debug_assertions)]
        {
            let mut owners: Vec<PointId> = family
                .iter()
                .flat_map(|s| {
                    s.members()
                        .iter()
                        .map(|&m| self.tree.planes()[m as usize].owner)
                })
                .collect();
            owners.sort_unstable();
            debug_assert!(
                owners.len() == self.len()
                    && owners
                        .iter()
                        .zip(self.table.points())
                        .all(|(o, p)| *o == p.id),
                "canonical sets must hold one plane per point"
            );
        }
        Ok(family)
    }

    /// Owners of the planes reaching at least `y`, over gated sets.
    fn reach(&self, interval: &QueryInterval<S>, y: S, c: &mut Counters) -> Result<Vec<PointId>> {
        let (x_l, x_r) = (interval.lo, interval.hi);
        let planes = self.tree.planes();
        let mut ids = Vec::new();
        for set in self.canonical_sets(interval, c)? {
            if set.envelope().is_some() && set.locate_max(planes, x_l, x_r, c).1 < y {
                continue;
            }
            c.comparisons += set.len() as u64;
            for &m in set.members() {
                let p = &planes[m as usize];
                if p.value(x_l, x_r) >= y {
                    ids.push(p.owner);
                    c.reported += 1;
                }
            }
        }
        Ok(ids)
    }
}

impl<S: Scalar> RangeIndex<S> for HistogramBoundedIndex<S> {
    fn len(&self) -> usize {
        self.table.len()
    }

    fn supports(&self, kind: IntervalKind) -> bool {
        kind == IntervalKind::Bounded
    }

    fn top1(&self, interval: &QueryInterval<S>, c: &mut Counters) -> Result<Hit<S>> {
        let planes = self.tree.planes();
        let ids: Vec<PointId> = self
            .canonical_sets(interval, c)?
            .iter()
            .map(|s| planes[s.locate_max(planes, interval.lo, interval.hi, c).0 as usize].owner)
            .collect();
        let best = self.table.exact(ids, interval, S::zero())[0];
        Ok(complete_topk(1, vec![best], c, |t, c| self.threshold(interval, t, c))?[0])
    }

    /// The engine choice does not apply: the sets are merged by doubling.
    fn topk(
        &self,
        interval: &QueryInterval<S>,
        k: usize,
        _engine: Engine,
        c: &mut Counters,
    ) -> Result<Vec<Hit<S>>> {
        check_k(k, self.len())?;
        let sets = self.canonical_sets(interval, c)?;
        let planes = self.tree.planes();
        let out = doubling_topk(&sets, planes, interval.lo, interval.hi, k, self.len(), c)?;
        let cand = self.table.exact(
            out.best.iter().map(|&m| planes[m as usize].owner),
            interval,
            S::zero(),
        );
        debug_assert_eq!(cand.len(), k);
        complete_topk(k, cand, c, |t, c| self.threshold(interval, t, c))
    }

    fn threshold(
        &self,
        interval: &QueryInterval<S>,
        tau: S,
        c: &mut Counters,
    ) -> Result<Vec<Hit<S>>> {
        check_tau(tau)?;
        if !interval.is_bounded() {
            return Err(Error::UnboundedInterval);
        }
        if tau == S::zero() {
            return Ok(self.table.all(interval));
        }
        let ids = self.reach(interval, tau - self.slack, c)?;
        Ok(self.table.exact(ids, interval, tau))
    }
}
