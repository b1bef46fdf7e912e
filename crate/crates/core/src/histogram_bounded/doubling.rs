//! Top-k over a family of plane sets by prefix doubling.
//!
//! Every set starts with its `L = ceil(log2 n)` highest planes; a max-heap
//! holds each set's lowest prefix plane. Extracting a set consumes its
//! prefix and doubles it. Once the consumed planes number at least `k`, the
//! last extracted height `sigma` bounds the answer from below, and every
//! plane above `sigma` sits in the union of the current prefixes. Sets that
//! fit entirely in a prefix are held in a second heap plane by plane.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::counters::Counters;
use crate::error::Result;
use crate::model::PointId;
use crate::scalar::{cmp, Scalar};

use super::canonical::{CanonicalPlaneSet, PairPlane};

/// Heap entry: larger value first, then smaller owner.
struct Key<S> {
    value: S,
    owner: PointId,
    item: u32,
}

impl<S: Scalar> PartialEq for Key<S> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<S: Scalar> Eq for Key<S> {}
impl<S: Scalar> PartialOrd for Key<S> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<S: Scalar> Ord for Key<S> {
    fn cmp(&self, o: &Self) -> Ordering {
        cmp(self.value, o.value)
            .then(o.owner.cmp(&self.owner))
            .then(o.item.cmp(&self.item))
    }
}

/// Prefix length for the first round.
pub fn base_prefix(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

/// What a doubling run leaves behind.
#[derive(Debug, Clone)]
pub struct DoublingOutcome<S> {
    /// The `k` highest planes of the pool, descending, ties by owner.
    pub best: Vec<u32>,
    /// Union of the final prefixes.
    pub pool: Vec<u32>,
    /// Height of the last consumed plane.
    pub sigma: S,
    pub extracts: u64,
}

pub fn doubling_topk<S: Scalar>(
    sets: &[&CanonicalPlaneSet<S>],
    planes: &[PairPlane<S>],
    x_l: S,
    x_r: S,
    k: usize,
    n: usize,
    c: &mut Counters,
) -> Result<DoublingOutcome<S>> {
    let l = base_prefix(n);
    let value = |m: u32| planes[m as usize].value(x_l, x_r);
    let key = |m: u32, item: u32| Key {
        value: value(m),
        owner: planes[m as usize].owner,
        item,
    };
    let mut prefix: Vec<Vec<u32>> = Vec::with_capacity(sets.len());
    let mut consumed = vec![0usize; sets.len()];
    let mut heap: BinaryHeap<Key<S>> = BinaryHeap::new();
    let mut loose: BinaryHeap<Key<S>> = BinaryHeap::new();
    for (i, set) in sets.iter().enumerate() {
        let p = set.t_highest(planes, x_l, x_r, l, c)?;
        if p.len() == set.len() {
            loose.extend(p.iter().map(|&m| key(m, m)));
        } else {
            heap.push(key(*p.last().unwrap(), i as u32));
        }
        c.heap_ops += 1;
        prefix.push(p);
    }

    let mut r = 0usize;
    let mut extracts = 0u64;
    let mut sigma = S::infinity();
    loop {
        let from_loose = match (heap.peek(), loose.peek()) {
            (None, None) => break,
            (Some(h), Some(o)) => o >= h,
            (None, Some(_)) => true,
            (Some(_), None) => false,
        };
        c.heap_ops += 1;
        if from_loose {
            sigma = loose.pop().unwrap().value;
            r += 1;
            if r >= k {
                break;
            }
            continue;
        }
        let top = heap.pop().unwrap();
        extracts += 1;
        c.extract_max += 1;
        sigma = top.value;
        let i = top.item as usize;
        r += prefix[i].len() - consumed[i];
        consumed[i] = prefix[i].len();
        if r >= k {
            break;
        }
        let grown = sets[i].t_highest(planes, x_l, x_r, 2 * prefix[i].len(), c)?;
        if grown.len() == sets[i].len() {
            loose.extend(grown[consumed[i]..].iter().map(|&m| key(m, m)));
        } else {
            heap.push(key(*grown.last().unwrap(), i as u32));
        }
        c.heap_ops += 1;
        prefix[i] = grown;
    }

    let pool: Vec<u32> = prefix.iter().flatten().copied().collect();
    debug_assert!(
        consumed.iter().zip(&prefix).all(|(c, p)| *c <= p.len()),
        "consumed planes outside the pool"
    );
    debug_assert!(
        pool.len() <= 2 * k + sets.len() * l,
        "pool of {} exceeds 2k + f L = {}",
        pool.len(),
        2 * k + sets.len() * l
    );
    debug_assert!(
        extracts as usize <= k.div_ceil(l) + 1,
        "{extracts} extractions for k={k}, L={l}"
    );
    #[cfg(debug_assertions)]
    {
        let inside: std::collections::HashSet<u32> = pool.iter().copied().collect();
        for set in sets {
            for &m in set.members() {
                debug_assert!(
                    value(m) <= sigma || inside.contains(&m),
                    "plane above sigma missing from the pool"
                );
            }
        }
    }

    let order = |a: &(S, PointId, u32), b: &(S, PointId, u32)| cmp(b.0, a.0).then(a.1.cmp(&b.1));
    let mut ranked: Vec<(S, PointId, u32)> = pool
        .iter()
        .map(|&m| (value(m), planes[m as usize].owner, m))
        .collect();
    c.comparisons += ranked.len() as u64;
    let k = k.min(ranked.len());
    if k < ranked.len() {
        ranked.select_nth_unstable_by(k, order);
        ranked.truncate(k);
    }
    ranked.sort_by(order);
    Ok(DoublingOutcome {
        best: ranked.iter().map(|r| r.2).collect(),
        pool,
        sigma,
        extracts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::model::CdfPiece;

    fn constant(v: f64, owner: u64) -> PairPlane<f64> {
        let piece = |b| CdfPiece {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            slope: 0.0,
            intercept: b,
        };
        PairPlane {
            left: piece(0.0),
            right: piece(v),
            owner,
            tag: 0,
        }
    }

    #[test]
    fn two_sets_example() {
        let planes: Vec<PairPlane<f64>> = [10.0, 6.0, 2.0, 9.0, 8.0, 1.0]
            .iter()
            .enumerate()
            .map(|(i, &v)| constant(v, i as u64))
            .collect();
        let s1 = CanonicalPlaneSet::from_members(vec![0, 1, 2], &planes).unwrap();
        let s2 = CanonicalPlaneSet::from_members(vec![3, 4, 5], &planes).unwrap();
        for n in [2, 4, 8] {
            let mut c = Counters::default();
            let out = doubling_topk(&[&s1, &s2], &planes, 0.0, 1.0, 3, n, &mut c).unwrap();
            let heights: Vec<f64> = out
                .best
                .iter()
                .map(|&m| planes[m as usize].value(0.0, 1.0))
                .collect();
            assert_eq!(heights, vec![10.0, 9.0, 8.0]);
        }
    }

    #[test]
    fn base_prefix_is_ceil_log2() {
        assert_eq!(
            [1, 2, 3, 4, 5, 1024, 1025].map(base_prefix),
            [1, 1, 2, 2, 3, 10, 11]
        );
    }
}
