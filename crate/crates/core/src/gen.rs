//! Seeded random instances and queries for tests, validation and benchmarks.

use rand::Rng;

use crate::model::{QueryInterval, UncertainPoint};
use crate::scalar::Scalar;

/// Coordinates live in `[0, SPAN)`.
pub const SPAN: f64 = 100.0;

/// Rounds to a grid step when one is given; coarse grids create shared
/// endpoints and tied probabilities.
fn snap(v: f64, grid: Option<f64>) -> f64 {
    match grid {
        Some(g) => (v / g).round() * g,
        None => v,
    }
}

/// `n` uniform points with ids `1..=n`.
pub fn uniform_points<S: Scalar>(
    rng: &mut impl Rng,
    n: usize,
    grid: Option<f64>,
) -> Vec<UncertainPoint<S>> {
    (1..=n as u64)
        .map(|id| loop {
            let lo = snap(rng.gen_range(0.0..SPAN), grid);
            let hi = snap(lo + rng.gen_range(0.2..SPAN / 4.0), grid);
            if let Ok(p) = UncertainPoint::uniform(id, S::lit(lo), S::lit(hi)) {
                break p;
            }
        })
        .collect()
}

/// `n` histogram points with `pieces` finite pieces each, ids `1..=n`.
/// Densities are random (occasionally zero) and normalized to unit mass.
pub fn histogram_points<S: Scalar>(
    rng: &mut impl Rng,
    n: usize,
    pieces: usize,
    grid: Option<f64>,
) -> Vec<UncertainPoint<S>> {
    assert!(pieces >= 1);
    (1..=n as u64)
        .map(|id| loop {
            let start = rng.gen_range(0.0..SPAN);
            let mut breaks = vec![snap(start, grid)];
            for _ in 0..pieces {
                let step = rng.gen_range(0.1..SPAN / (2.0 * pieces as f64));
                breaks.push(snap(breaks.last().unwrap() + step, grid));
            }
            let raw: Vec<f64> = (0..pieces)
                .map(|_| {
                    if rng.gen_bool(0.15) {
                        0.0
                    } else {
                        rng.gen_range(0.05..1.0)
                    }
                })
                .collect();
            let mass: f64 = raw
                .iter()
                .zip(breaks.windows(2))
                .map(|(d, w)| d * (w[1] - w[0]))
                .sum();
            if mass <= 0.0 {
                continue;
            }
            let breaks: Vec<S> = breaks.into_iter().map(S::lit).collect();
            let dens: Vec<S> = raw.iter().map(|d| S::lit(d / mass)).collect();
            if let Ok(p) = UncertainPoint::histogram(id, breaks, dens) {
                break p;
            }
        })
        .collect()
}

/// A coordinate for a query endpoint: usually uniform over a slightly wider
/// range than the data, sometimes exactly on a pdf breakpoint.
pub fn query_coordinate<S: Scalar>(rng: &mut impl Rng, points: &[UncertainPoint<S>]) -> S {
    if !points.is_empty() && rng.gen_bool(0.2) {
        let p = &points[rng.gen_range(0..points.len())];
        let b = p.cdf().breaks();
        return b[rng.gen_range(0..b.len())];
    }
    S::lit(rng.gen_range(-0.1 * SPAN..1.1 * SPAN))
}

pub fn bounded_interval<S: Scalar>(
    rng: &mut impl Rng,
    points: &[UncertainPoint<S>],
) -> QueryInterval<S> {
    let a = query_coordinate(rng, points);
    let b = query_coordinate(rng, points);
    QueryInterval::new(a.min(b), a.max(b)).expect("finite ordered endpoints")
}

pub fn unbounded_interval<S: Scalar>(
    rng: &mut impl Rng,
    points: &[UncertainPoint<S>],
) -> QueryInterval<S> {
    let x = query_coordinate(rng, points);
    if rng.gen_bool(0.5) {
        QueryInterval::new(S::neg_infinity(), x).unwrap()
    } else {
        QueryInterval::new(x, S::infinity()).unwrap()
    }
}

/// A threshold in `[0, 1]`: random, sometimes an exact point probability so
/// the inclusive comparison is exercised.
pub fn threshold<S: Scalar>(
    rng: &mut impl Rng,
    points: &[UncertainPoint<S>],
    interval: &QueryInterval<S>,
) -> S {
    match rng.gen_range(0..10) {
        0 => S::zero(),
        1 => S::one(),
        2 | 3 if !points.is_empty() => points[rng.gen_range(0..points.len())].probability(interval),
        _ => S::lit(rng.gen_range(0.0..1.0)),
    }
}
