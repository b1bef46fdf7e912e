//! Query and result types shared by every index.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::Line;
use crate::halfplane::Engine;
use crate::model::{interval_probability, IntervalKind, PointId, QueryInterval, UncertainPoint};
use crate::scalar::{cmp, Scalar};

/// A point and its probability of lying in the query interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit<S> {
    pub id: PointId,
    pub prob: S,
}

/// Result order: probability descending, id ascending.
pub fn result_order<S: Scalar>(a: &Hit<S>, b: &Hit<S>) -> Ordering {
    cmp(b.prob, a.prob).then(a.id.cmp(&b.id))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Query<S> {
    Top1(QueryInterval<S>),
    TopK(QueryInterval<S>, usize),
    Threshold(QueryInterval<S>, S),
}

impl<S: Scalar> Query<S> {
    pub fn interval(&self) -> &QueryInterval<S> {
        match self {
            Query::Top1(i) | Query::TopK(i, _) | Query::Threshold(i, _) => i,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Query::Top1(_) => "top1",
            Query::TopK(..) => "topk",
            Query::Threshold(..) => "thresh",
        }
    }
}

/// Ordered hits plus the work counters of the query.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult<S> {
    pub hits: Vec<Hit<S>>,
    pub counters: Counters,
}

/// Common query surface of the four indexes.
pub trait RangeIndex<S: Scalar> {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether queries with this interval shape can be answered.
    fn supports(&self, kind: IntervalKind) -> bool;

    fn top1(&self, interval: &QueryInterval<S>, c: &mut Counters) -> Result<Hit<S>>;

    fn topk(
        &self,
        interval: &QueryInterval<S>,
        k: usize,
        engine: Engine,
        c: &mut Counters,
    ) -> Result<Vec<Hit<S>>>;

    fn threshold(
        &self,
        interval: &QueryInterval<S>,
        tau: S,
        c: &mut Counters,
    ) -> Result<Vec<Hit<S>>>;

    fn run(&self, query: &Query<S>, engine: Engine) -> Result<QueryResult<S>> {
        let mut counters = Counters::default();
        let hits = match query {
            Query::Top1(i) => vec![self.top1(i, &mut counters)?],
            Query::TopK(i, k) => self.topk(i, *k, engine, &mut counters)?,
            Query::Threshold(i, t) => self.threshold(i, *t, &mut counters)?,
        };
        Ok(QueryResult { hits, counters })
    }
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::KOutOfRange(k, n))
    } else {
        Ok(())
    }
}

pub(crate) fn check_tau<S: Scalar>(tau: S) -> Result<()> {
    if tau >= S::zero() && tau <= S::one() {
        Ok(())
    } else {
        Err(Error::TauOutOfRange(tau.as_f64()))
    }
}

/// The points of an index with exact probability lookup by id.
#[derive(Debug, Clone)]
pub(crate) struct PointTable<S> {
    points: Vec<UncertainPoint<S>>,
    slot: HashMap<PointId, usize>,
}

impl<S: Scalar> PointTable<S> {
    pub fn new(mut points: Vec<UncertainPoint<S>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        crate::model::check_unique_ids(&points)?;
        points.sort_by_key(|p| p.id);
        let slot = points.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
        Ok(Self { points, slot })
    }

    pub fn points(&self) -> &[UncertainPoint<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn get(&self, id: PointId) -> &UncertainPoint<S> {
        &self.points[self.slot[&id]]
    }

    pub fn hit(&self, id: PointId, interval: &QueryInterval<S>) -> Hit<S> {
        Hit {
            id,
            prob: interval_probability(self.get(id), interval),
        }
    }

    /// Exact hits for candidate ids: deduplicated, filtered by `prob >= tau`
    /// and sorted in result order.
    pub fn exact(
        &self,
        ids: impl IntoIterator<Item = PointId>,
        interval: &QueryInterval<S>,
        tau: S,
    ) -> Vec<Hit<S>> {
        let mut ids: Vec<PointId> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        let mut hits: Vec<Hit<S>> = ids
            .into_iter()
            .map(|id| self.hit(id, interval))
            .filter(|h| h.prob >= tau)
            .collect();
        hits.sort_by(result_order);
        hits
    }

    /// Every point, in result order.
    pub fn all(&self, interval: &QueryInterval<S>) -> Vec<Hit<S>> {
        self.exact(self.points.iter().map(|p| p.id), interval, S::zero())
    }

    /// Largest magnitude of a coordinate appearing in any pdf.
    pub fn coordinate_range(&self) -> S {
        let mut r = S::zero();
        for p in &self.points {
            for b in p.cdf().breaks() {
                r = r.max(b.abs());
            }
        }
        r
    }
}

/// Slack for walking on line heights: proportional to the largest height
/// magnitude a line reaches within the coordinate range of the data.
pub(crate) fn height_slack<S: Scalar>(lines: &[Line<S>], range: S) -> S {
    let m = lines.iter().fold(S::one(), |m, l| {
        m.max(l.slope.abs() * range + l.intercept.abs())
    });
    S::walk_slack() * m
}

/// Turns the `k` candidates found by an engine into the exact answer.
///
/// Every candidate probability is at least the true `k`-th largest, so all
/// points at or above the smallest candidate probability contain the exact
/// top `k`; sorting them resolves ties by id. Work is charged to `tie_pass`.
pub(crate) fn complete_topk<S: Scalar>(
    k: usize,
    candidates: Vec<Hit<S>>,
    c: &mut Counters,
    threshold: impl FnOnce(S, &mut Counters) -> Result<Vec<Hit<S>>>,
) -> Result<Vec<Hit<S>>> {
    debug_assert_eq!(candidates.len(), k);
    let tau = candidates
        .iter()
        .map(|h| h.prob)
        .fold(S::one(), |a, b| a.min(b));
    let mut scratch = Counters::default();
    let mut all = threshold(tau, &mut scratch)?;
    c.tie_pass += scratch.comparisons + scratch.bridge_steps + scratch.reported + all.len() as u64;
    debug_assert!(all.len() >= k);
    all.truncate(k);
    Ok(all)
}

/// Answers for the full line: every probability is 1.
pub(crate) fn full_interval_topk<S: Scalar>(table: &PointTable<S>, k: usize) -> Vec<Hit<S>> {
    table
        .points()
        .iter()
        .take(k)
        .map(|p| Hit {
            id: p.id,
            prob: S::one(),
        })
        .collect()
}
