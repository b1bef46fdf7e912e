//! Uniform pdfs, intervals with one infinite side.
//!
//! For `(-inf, x]` the probability of `p` is its cdf line evaluated at `x`
//! (clamped to `[0, 1]`), so queries become questions about the lines above
//! or highest at a vertical line. `[x, +inf)` uses the lines of `1 - F_p`.

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::Line;
use crate::halfplane::{Engine, LayeredHalfplaneIndex};
use crate::model::{IntervalKind, QueryInterval, UncertainPoint};
use crate::query::{
    check_k, check_tau, complete_topk, full_interval_topk, height_slack, Hit, PointTable,
    RangeIndex,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct UniformUnboundedIndex<S> {
    table: PointTable<S>,
    /// Lines of `F_p`, queried at `x_r` when `x_l = -inf`.
    left: LayeredHalfplaneIndex<S>,
    /// Lines of `1 - F_p`, queried at `x_l` when `x_r = +inf`.
    right: LayeredHalfplaneIndex<S>,
    slack: S,
}

/// The cdf line of a uniform point and its mirror `1 - F_p`.
pub fn uniform_lines<S: Scalar>(p: &UncertainPoint<S>) -> Result<(Line<S>, Line<S>)> {
    p.as_uniform().ok_or(Error::NonUniformPoint(p.id))?;
    let piece = p.cdf().piece(1);
    Ok((
        Line::new(piece.slope, piece.intercept, p.id),
        Line::new(-piece.slope, S::one() - piece.intercept, p.id),
    ))
}

impl<S: Scalar> UniformUnboundedIndex<S> {
    pub fn build(points: Vec<UncertainPoint<S>>) -> Result<Self> {
        let table = PointTable::new(points)?;
        let mut left = Vec::with_capacity(table.len());
        let mut right = Vec::with_capacity(table.len());
        for p in table.points() {
            let (l, r) = uniform_lines(p)?;
            left.push(l);
            right.push(r);
        }
        let slack = height_slack(&left, table.coordinate_range())
            .max(height_slack(&right, table.coordinate_range()));
        Ok(Self {
            left: LayeredHalfplaneIndex::build(&left)?,
            right: LayeredHalfplaneIndex::build(&right)?,
            table,
            slack,
        })
    }

    pub fn left_index(&self) -> &LayeredHalfplaneIndex<S> {
        &self.left
    }

    pub fn right_index(&self) -> &LayeredHalfplaneIndex<S> {
        &self.right
    }

    /// The sub-index and the vertical line for an interval, or `None` for the
    /// full line.
    fn side(&self, interval: &QueryInterval<S>) -> Result<Option<(&LayeredHalfplaneIndex<S>, S)>> {
        match interval.kind() {
            IntervalKind::LeftUnbounded => Ok(Some((&self.left, interval.hi))),
            IntervalKind::RightUnbounded => Ok(Some((&self.right, interval.lo))),
            IntervalKind::Full => Ok(None),
            IntervalKind::Bounded => Err(Error::BoundedInterval),
        }
    }
}

impl<S: Scalar> RangeIndex<S> for UniformUnboundedIndex<S> {
    fn len(&self) -> usize {
        self.table.len()
    }

    fn supports(&self, kind: IntervalKind) -> bool {
        kind != IntervalKind::Bounded
    }

    fn top1(&self, interval: &QueryInterval<S>, c: &mut Counters) -> Result<Hit<S>> {
        let Some((index, x)) = self.side(interval)? else {
            return Ok(full_interval_topk(&self.table, 1)[0]);
        };
        let mut walk = index.walk(x, c);
        let (layer, pos) = walk.next(index, c).expect("at least one layer");
        let best = self.table.hit(index.line(layer, pos).owner, interval);
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
        let Some((index, x)) = self.side(interval)? else {
            return Ok(full_interval_topk(&self.table, k));
        };
        let found = index.topk(x, k, engine, c)?;
        let cand = found
            .iter()
            .map(|h| self.table.hit(h.line.owner, interval))
            .collect();
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
        let Some((index, x)) = side else {
            return Ok(self.table.all(interval));
        };
        let found = index.report_above(x, tau - self.slack, c);
        Ok(self
            .table
            .exact(found.iter().map(|h| h.line.owner), interval, tau))
    }
}
