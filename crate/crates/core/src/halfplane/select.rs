//! Selection over collections of descending sorted streams.
//!
//! Elements are ranked by value (descending), then stream index, then
//! position, which is a total order consistent with every stream's own order.
//! All routines return prefix counts or picks under that order, so results are
//! deterministic under ties.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::scalar::{cmp, Scalar};

/// A logically sorted (non-increasing) sequence with random access.
/// Implementations may materialize lazily; `len` must be exact.
pub trait SortedStream<S: Scalar> {
    fn len(&self) -> usize;
    fn get(&mut self, i: usize, c: &mut Counters) -> S;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A materialized descending slice.
#[derive(Debug, Clone, Copy)]
pub struct SliceStream<'a, S>(pub &'a [S]);

impl<S: Scalar> SortedStream<S> for SliceStream<'_, S> {
    fn len(&self) -> usize {
        self.0.len()
    }
    fn get(&mut self, i: usize, _c: &mut Counters) -> S {
        self.0[i]
    }
}

/// One selected element: `value` sits at `pos` of stream `stream`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pick<S> {
    pub value: S,
    pub stream: usize,
    pub pos: usize,
}

/// `Less` means `a` ranks before (is larger than) `b`.
#[inline]
pub fn rank_cmp<S: Scalar>(a: &Pick<S>, b: &Pick<S>) -> Ordering {
    cmp(b.value, a.value)
        .then(a.stream.cmp(&b.stream))
        .then(a.pos.cmp(&b.pos))
}

#[inline]
fn fetch<S: Scalar, T: SortedStream<S>>(
    streams: &mut [T],
    stream: usize,
    pos: usize,
    c: &mut Counters,
) -> Pick<S> {
    c.accesses += 1;
    Pick {
        value: streams[stream].get(pos, c),
        stream,
        pos,
    }
}

/// A stream whose positions are read at most once; repeated reads come from
/// a cache and cost no access.
struct ReadOnce<'a, S, T> {
    inner: &'a mut T,
    seen: Vec<Option<S>>,
}

impl<'a, S: Scalar, T: SortedStream<S>> ReadOnce<'a, S, T> {
    fn new(inner: &'a mut T) -> Self {
        Self {
            inner,
            seen: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.inner.len()
    }
}

#[inline]
fn pick<S: Scalar, T: SortedStream<S>>(
    streams: &mut [ReadOnce<'_, S, T>],
    stream: usize,
    pos: usize,
    c: &mut Counters,
) -> Pick<S> {
    let s = &mut streams[stream];
    if s.seen.len() <= pos {
        s.seen.resize(pos + 1, None);
    }
    let value = match s.seen[pos] {
        Some(v) => v,
        None => {
            c.accesses += 1;
            let v = s.inner.get(pos, c);
            s.seen[pos] = Some(v);
            v
        }
    };
    Pick { value, stream, pos }
}

/// Every `scale`-th element of a stream: element `j` is base position
/// `(j + 1) * scale - 1`.
#[derive(Debug, Clone, Copy)]
struct View {
    stream: usize,
    scale: usize,
    len: usize,
}

impl View {
    #[inline]
    fn base(&self, j: usize) -> usize {
        (j + 1) * self.scale - 1
    }
}

const DIRECT_K: usize = 2;

/// Prefix counts per stream whose union is the top `k` elements.
pub fn select_top<S: Scalar, T: SortedStream<S>>(
    streams: &mut [T],
    k: usize,
    c: &mut Counters,
) -> Result<Vec<usize>> {
    let mut once: Vec<ReadOnce<'_, S, T>> = streams.iter_mut().map(ReadOnce::new).collect();
    select_top_once(&mut once, k, c)
}

fn select_top_once<S: Scalar, T: SortedStream<S>>(
    streams: &mut [ReadOnce<'_, S, T>],
    k: usize,
    c: &mut Counters,
) -> Result<Vec<usize>> {
    let have: usize = streams.iter().map(|s| s.len()).sum();
    if k > have {
        return Err(Error::NotEnoughElements { need: k, have });
    }
    let mut counts = vec![0; streams.len()];
    if k == 0 {
        return Ok(counts);
    }
    if streams.len() == 1 {
        counts[0] = k;
        return Ok(counts);
    }
    let views: Vec<View> = (0..streams.len())
        .map(|i| View {
            stream: i,
            scale: 1,
            len: streams[i].len(),
        })
        .collect();
    for (v, n) in views.iter().zip(select_views(streams, &views, k, c)) {
        counts[v.stream] = n;
    }
    Ok(counts)
}

/// The `k`-th largest value of the union of `streams`.
pub fn select_kth_desc<S: Scalar, T: SortedStream<S>>(
    streams: &mut [T],
    k: usize,
    c: &mut Counters,
) -> Result<S> {
    if k == 0 {
        return Err(Error::KOutOfRange(0, streams.iter().map(|s| s.len()).sum()));
    }
    let mut once: Vec<ReadOnce<'_, S, T>> = streams.iter_mut().map(ReadOnce::new).collect();
    let counts = select_top_once(&mut once, k, c)?;
    let mut worst: Option<Pick<S>> = None;
    for (i, &n) in counts.iter().enumerate() {
        if n > 0 {
            let p = pick(&mut once, i, n - 1, c);
            if worst.is_none_or(|w| rank_cmp(&p, &w) == Ordering::Greater) {
                worst = Some(p);
            }
        }
    }
    Ok(worst.expect("k >= 1").value)
}

fn select_views<S: Scalar, T: SortedStream<S>>(
    streams: &mut [ReadOnce<'_, S, T>],
    views: &[View],
    k: usize,
    c: &mut Counters,
) -> Vec<usize> {
    let mut counts = vec![0; views.len()];
    let mut act: Vec<(usize, View)> = views
        .iter()
        .enumerate()
        .filter(|(_, v)| v.len > 0)
        .map(|(i, v)| {
            (
                i,
                View {
                    len: v.len.min(k),
                    ..*v
                },
            )
        })
        .collect();
    if act.len() > k {
        // a stream whose head is not among the k best heads contributes nothing
        let mut heads: Vec<(Pick<S>, usize)> = act
            .iter()
            .enumerate()
            .map(|(a, (_, v))| (pick(streams, v.stream, v.base(0), c), a))
            .collect();
        heads.select_nth_unstable_by(k - 1, |x, y| rank_cmp(&x.0, &y.0));
        let mut keep = vec![false; act.len()];
        for (_, a) in &heads[..k] {
            keep[*a] = true;
        }
        let mut it = keep.iter();
        act.retain(|_| *it.next().unwrap());
    }
    let total: usize = act.iter().map(|(_, v)| v.len).sum();
    let half = k.div_ceil(2);
    let sampled: Vec<View> = act
        .iter()
        .map(|(_, v)| View {
            stream: v.stream,
            scale: 2 * v.scale,
            len: v.len / 2,
        })
        .collect();
    let sampled_total: usize = sampled.iter().map(|v| v.len).sum();

    let mut cand: Vec<(Pick<S>, usize)> = Vec::new();
    if k <= DIRECT_K || total <= 2 * k + act.len() || sampled_total < half {
        for (a, (_, v)) in act.iter().enumerate() {
            for j in 0..v.len {
                cand.push((pick(streams, v.stream, v.base(j), c), a));
            }
        }
    } else {
        let s = select_views(streams, &sampled, half, c);
        let mut pivot: Option<Pick<S>> = None;
        for (a, v) in sampled.iter().enumerate() {
            if s[a] > 0 {
                let p = pick(streams, v.stream, v.base(s[a] - 1), c);
                if pivot.is_none_or(|w| rank_cmp(&p, &w) == Ordering::Greater) {
                    pivot = Some(p);
                }
            }
        }
        let pivot = pivot.expect("half >= 1");
        for (a, (_, v)) in act.iter().enumerate() {
            let full = 2 * s[a];
            for j in 0..full {
                cand.push((pick(streams, v.stream, v.base(j), c), a));
            }
            if full < v.len {
                let p = pick(streams, v.stream, v.base(full), c);
                if rank_cmp(&p, &pivot) == Ordering::Less {
                    cand.push((p, a));
                }
            }
        }
    }
    debug_assert!(cand.len() >= k);
    cand.select_nth_unstable_by(k - 1, |x, y| rank_cmp(&x.0, &y.0));
    for (_, a) in &cand[..k] {
        counts[act[*a].0] += 1;
    }
    counts
}

/// Heap entry ordered so that `BinaryHeap` pops the best-ranked pick.
#[derive(Debug, Clone, Copy)]
struct Best<S>(Pick<S>, usize);

impl<S: Scalar> PartialEq for Best<S> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<S: Scalar> Eq for Best<S> {}
impl<S: Scalar> PartialOrd for Best<S> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<S: Scalar> Ord for Best<S> {
    fn cmp(&self, o: &Self) -> Ordering {
        rank_cmp(&o.0, &self.0)
    }
}

/// Exact top `k` by merging stream heads through a heap; best first.
pub fn heap_merge_topk<S: Scalar, T: SortedStream<S>>(
    streams: &mut [T],
    k: usize,
    c: &mut Counters,
) -> Result<Vec<Pick<S>>> {
    let have: usize = streams.iter().map(|s| s.len()).sum();
    if k > have {
        return Err(Error::NotEnoughElements { need: k, have });
    }
    let mut heap = BinaryHeap::new();
    for i in 0..streams.len() {
        if !streams[i].is_empty() {
            heap.push(Best(fetch(streams, i, 0, c), 0));
            c.heap_ops += 1;
        }
    }
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let Best(p, _) = heap.pop().expect("enough elements");
        c.heap_ops += 1;
        c.extract_max += 1;
        out.push(p);
        if p.pos + 1 < streams[p.stream].len() {
            heap.push(Best(fetch(streams, p.stream, p.pos + 1, c), 0));
            c.heap_ops += 1;
        }
    }
    Ok(out)
}

/// Default block size: `max(1, ceil(log2 log2 n))`.
pub fn default_block(n: usize) -> usize {
    let lg = (n.max(2) as f64).log2();
    (lg.log2().ceil() as usize).max(1)
}

/// Exact top `k` using a heap over every `h`-th element of each stream.
/// Each extraction pulls a whole block of `h` elements into the pool; the
/// partially consumed block of every stream is added at the end. Returns the
/// picks best first.
pub fn block_heap_topk<S: Scalar, T: SortedStream<S>>(
    streams: &mut [T],
    k: usize,
    h: usize,
    c: &mut Counters,
) -> Result<Vec<Pick<S>>> {
    assert!(h >= 1);
    let have: usize = streams.iter().map(|s| s.len()).sum();
    if k > have {
        return Err(Error::NotEnoughElements { need: k, have });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    // entry: (red element, block start)
    let mut heap = BinaryHeap::new();
    for i in 0..streams.len() {
        let len = streams[i].len();
        if len > 0 {
            heap.push(Best(fetch(streams, i, h.min(len) - 1, c), 0));
            c.heap_ops += 1;
        }
    }
    let mut pool: Vec<Pick<S>> = Vec::with_capacity(k + h);
    while pool.len() < k {
        let Best(red, start) = heap.pop().expect("enough elements");
        c.heap_ops += 1;
        c.extract_max += 1;
        for pos in start..red.pos {
            pool.push(fetch(streams, red.stream, pos, c));
        }
        pool.push(red);
        let len = streams[red.stream].len();
        let next = red.pos + 1;
        if next < len {
            heap.push(Best(
                fetch(streams, red.stream, (next + h).min(len) - 1, c),
                next,
            ));
            c.heap_ops += 1;
        }
    }
    for Best(red, start) in heap.into_vec() {
        for pos in start..red.pos {
            pool.push(fetch(streams, red.stream, pos, c));
        }
    }
    debug_assert!(pool.len() < k + h + (h - 1) * streams.len());
    pool.select_nth_unstable_by(k - 1, rank_cmp);
    pool.truncate(k);
    pool.sort_by(rank_cmp);
    Ok(pool)
}

/// Exact top `k` via `select_top`, materialized best first.
pub fn select_merge_topk<S: Scalar, T: SortedStream<S>>(
    streams: &mut [T],
    k: usize,
    c: &mut Counters,
) -> Result<Vec<Pick<S>>> {
    let mut once: Vec<ReadOnce<'_, S, T>> = streams.iter_mut().map(ReadOnce::new).collect();
    let counts = select_top_once(&mut once, k, c)?;
    let mut out = Vec::with_capacity(k);
    for (i, &n) in counts.iter().enumerate() {
        for pos in 0..n {
            out.push(pick(&mut once, i, pos, c));
        }
    }
    out.sort_by(rank_cmp);
    Ok(out)
}
