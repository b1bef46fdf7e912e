#![allow(dead_code)]

use uqr_core::oracle::brute_query;
use uqr_core::{Engine, Hit, Query, RangeIndex, Scalar, UncertainPoint};

/// Compares an index answer with the oracle: identical ids in identical
/// order, probabilities within `tol`.
pub fn same_hits<S: Scalar>(got: &[Hit<S>], want: &[Hit<S>], tol: f64) -> Result<(), String> {
    if got.len() != want.len() {
        return Err(format!("length {} != {}", got.len(), want.len()));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        if g.id != w.id || (g.prob - w.prob).abs().as_f64() > tol {
            return Err(format!(
                "entry {i}: got {}:{} want {}:{}",
                g.id, g.prob, w.id, w.prob
            ));
        }
    }
    Ok(())
}

/// Runs `query` on `index` with every engine and checks each against the
/// oracle.
pub fn check_query<S: Scalar, I: RangeIndex<S>>(
    index: &I,
    points: &[UncertainPoint<S>],
    query: &Query<S>,
) -> Result<(), String> {
    let want = brute_query(points, query).map_err(|e| e.to_string())?;
    for engine in Engine::ALL {
        let got = index
            .run(query, engine)
            .map_err(|e| format!("{engine}: {e}"))?;
        same_hits(&got.hits, &want, 1e-9).map_err(|e| format!("{engine} {query:?}: {e}"))?;
        if !matches!(query, Query::TopK(..)) {
            break;
        }
    }
    Ok(())
}
