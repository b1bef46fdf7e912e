//! Brute-force answers computed from the model alone.

use crate::error::Result;
use crate::model::{interval_probability, QueryInterval, UncertainPoint};
use crate::query::{check_k, check_tau, result_order, Hit, Query};
use crate::scalar::Scalar;

/// Every point with its probability, in result order.
pub fn brute_all<S: Scalar>(
    points: &[UncertainPoint<S>],
    interval: &QueryInterval<S>,
) -> Vec<Hit<S>> {
    let mut hits: Vec<Hit<S>> = points
        .iter()
        .map(|p| Hit {
            id: p.id,
            prob: interval_probability(p, interval),
        })
        .collect();
    hits.sort_by(result_order);
    hits
}

pub fn brute_top1<S: Scalar>(
    points: &[UncertainPoint<S>],
    interval: &QueryInterval<S>,
) -> Result<Hit<S>> {
    Ok(brute_topk(points, interval, 1)?[0])
}

pub fn brute_topk<S: Scalar>(
    points: &[UncertainPoint<S>],
    interval: &QueryInterval<S>,
    k: usize,
) -> Result<Vec<Hit<S>>> {
    check_k(k, points.len())?;
    let mut all = brute_all(points, interval);
    all.truncate(k);
    Ok(all)
}

pub fn brute_threshold<S: Scalar>(
    points: &[UncertainPoint<S>],
    interval: &QueryInterval<S>,
    tau: S,
) -> Result<Vec<Hit<S>>> {
    check_tau(tau)?;
    Ok(brute_all(points, interval)
        .into_iter()
        .filter(|h| h.prob >= tau)
        .collect())
}

pub fn brute_query<S: Scalar>(
    points: &[UncertainPoint<S>],
    query: &Query<S>,
) -> Result<Vec<Hit<S>>> {
    match query {
        Query::Top1(i) => Ok(vec![brute_top1(points, i)?]),
        Query::TopK(i, k) => brute_topk(points, i, *k),
        Query::Threshold(i, t) => brute_threshold(points, i, *t),
    }
}
