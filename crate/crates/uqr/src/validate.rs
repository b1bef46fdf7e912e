//! `uqr validate`: random queries against every applicable index and engine,
//! compared with the brute-force oracle.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uqr_core::oracle::brute_query;
use uqr_core::{gen, Engine, Hit64, Query64, QueryInterval64, UncertainPoint64};

use crate::format::print_query;
use crate::indexes::{IndexChoice, Indexes};

pub const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: usize,
    pub mismatches: usize,
    /// Mismatch lines followed by a summary line.
    pub text: String,
}

/// Threshold answers compare as id sets; ranked answers must list the same
/// ids in the same order with probabilities within [`PROB_TOLERANCE`].
pub fn agrees(query: &Query64, got: &[Hit64], want: &[Hit64]) -> bool {
    if let Query64::Threshold(..) = query {
        let ids = |h: &[Hit64]| {
            let mut v: Vec<u64> = h.iter().map(|h| h.id).collect();
            v.sort_unstable();
            v
        };
        return ids(got) == ids(want);
    }
    got.len() == want.len()
        && got
            .iter()
            .zip(want)
            .all(|(g, w)| g.id == w.id && (g.prob - w.prob).abs() <= PROB_TOLERANCE)
}

fn hits_text(hits: &[Hit64]) -> String {
    let items: Vec<String> = hits
        .iter()
        .map(|h| format!("{}:{:.12}", h.id, h.prob))
        .collect();
    format!("[{}]", items.join(" "))
}

fn interval(rng: &mut impl Rng, points: &[UncertainPoint64]) -> QueryInterval64 {
    match rng.gen_range(0..20) {
        0 => QueryInterval64::new(f64::NEG_INFINITY, f64::INFINITY).unwrap(),
        1..=10 => gen::bounded_interval(rng, points),
        _ => gen::unbounded_interval(rng, points),
    }
}

/// `count` queries of each kind from `seed`.
pub fn random_queries(points: &[UncertainPoint64], count: usize, seed: u64) -> Vec<Query64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = points.len();
    let mut out = Vec::with_capacity(3 * count);
    for kind in 0..3 {
        for _ in 0..count {
            let i = interval(&mut rng, points);
            out.push(match kind {
                0 => Query64::Top1(i),
                1 => Query64::TopK(i, rng.gen_range(1..=n)),
                _ => Query64::Threshold(i, gen::threshold(&mut rng, points, &i)),
            });
        }
    }
    out
}

pub fn run(indexes: &Indexes, count: usize, seed: u64) -> Report {
    let mut report = Report::default();
    let points = indexes.points();
    let candidates: &[IndexChoice] = if indexes.all_uniform() {
        &IndexChoice::CONCRETE
    } else {
        &IndexChoice::CONCRETE[2..]
    };
    let queries = if points.is_empty() {
        Vec::new()
    } else {
        random_queries(points, count, seed)
    };
    for (qi, q) in queries.iter().enumerate() {
        let want = brute_query(points, q).expect("generated queries are valid");
        let engines: &[Engine] = match q {
            Query64::TopK(..) => &Engine::ALL,
            _ => &[Engine::Select],
        };
        for &choice in candidates {
            let index = match indexes.for_query(choice, q.interval().kind()) {
                Ok((_, index)) => index,
                Err(_) => continue,
            };
            for &engine in engines {
                report.checks += 1;
                let got = index.run(q, engine);
                let ok = matches!(&got, Ok(r) if agrees(q, &r.hits, &want));
                if !ok {
                    report.mismatches += 1;
                    let got = match got {
                        Ok(r) => hits_text(&r.hits),
                        Err(e) => format!("error: {e}"),
                    };
                    writeln!(
                        report.text,
                        "mismatch seed={seed} query={} index={choice} engine={engine} `{}` got={got} want={}",
                        qi + 1,
                        print_query(q),
                        hits_text(&want)
                    )
                    .unwrap();
                }
            }
        }
    }
    writeln!(
        report.text,
        "{} checks, {} mismatches, {} points, seed {seed}",
        report.checks,
        report.mismatches,
        points.len()
    )
    .unwrap();
    report
}
