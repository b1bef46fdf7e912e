//! Layered half-plane reporting and top-k extraction over line sets.
//!
//! An index stores the envelope layers of its lines plus a cascade over the
//! layers' breakpoint catalogs. At a vertical line `x` the top line of every
//! layer is found with one binary search and O(1) bridge steps per layer;
//! the lines of a layer that lie above a threshold form a contiguous run
//! around that top line.

pub mod select;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::{peel_layers, Cursor, EnvelopeChain, FractionalCascade, Line};
use crate::scalar::{cmp, Scalar};

pub use select::{
    block_heap_topk, default_block, heap_merge_topk, rank_cmp, select_kth_desc, select_merge_topk,
    select_top, Pick, SliceStream, SortedStream,
};

/// Top-k extraction strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Candidate heap seeded with layer tops, at most three insertions per
    /// extraction.
    Heap,
    /// Selection over sorted runs.
    Select,
    /// Block heap over layer tops, then selection.
    Block,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Heap, Engine::Select, Engine::Block];
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Heap => "heap",
            Engine::Select => "select",
            Engine::Block => "block",
        })
    }
}

impl FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "heap" => Ok(Engine::Heap),
            "select" => Ok(Engine::Select),
            "block" => Ok(Engine::Block),
            _ => Err(format!("unknown engine `{s}`")),
        }
    }
}

/// A line together with its height at the query's vertical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineHit<S> {
    pub height: S,
    pub line: Line<S>,
}

/// Height descending, then owner and tag ascending.
pub fn hit_order<S: Scalar>(a: &LineHit<S>, b: &LineHit<S>) -> Ordering {
    cmp(b.height, a.height)
        .then(a.line.owner.cmp(&b.line.owner))
        .then(a.line.tag.cmp(&b.line.tag))
}

#[derive(Debug, Clone)]
pub struct LayeredHalfplaneIndex<S> {
    layers: Vec<EnvelopeChain<S>>,
    cascade: FractionalCascade<S>,
    size: usize,
}

impl<S: Scalar> LayeredHalfplaneIndex<S> {
    pub fn build(lines: &[Line<S>]) -> Result<Self> {
        let decomposition = peel_layers(lines)?;
        let layers = decomposition.layers;
        let catalogs: Vec<Vec<S>> = layers.iter().map(|l| l.breaks().to_vec()).collect();
        let children: Vec<Vec<usize>> = (0..layers.len())
            .map(|i| {
                if i + 1 < layers.len() {
                    vec![i + 1]
                } else {
                    Vec::new()
                }
            })
            .collect();
        let cascade = FractionalCascade::build(catalogs, &children);
        Ok(Self {
            layers,
            cascade,
            size: lines.len(),
        })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn layers(&self) -> &[EnvelopeChain<S>] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// The augmented catalog of the first layer. An outer cascade can use it
    /// as its node catalog and enter this index with `walk_from`.
    pub fn entry_catalog(&self) -> &[S] {
        self.cascade.augmented(0)
    }

    pub fn walk(&self, x: S, c: &mut Counters) -> LayerWalk<S> {
        LayerWalk {
            cursor: Some(self.cascade.locate(0, x, c)),
            x,
        }
    }

    /// `pos` = entries of `entry_catalog()` strictly below `x`.
    pub fn walk_from(&self, pos: usize, x: S) -> LayerWalk<S> {
        LayerWalk {
            cursor: Some(Cursor { node: 0, pos }),
            x,
        }
    }

    #[inline]
    pub fn line(&self, layer: usize, pos: usize) -> &Line<S> {
        &self.layers[layer].lines()[pos]
    }

    #[inline]
    fn hit(&self, layer: usize, pos: usize, x: S) -> LineHit<S> {
        let line = *self.line(layer, pos);
        LineHit {
            height: line.eval(x),
            line,
        }
    }

    /// All lines with `l(x) >= y`.
    pub fn report_above(&self, x: S, y: S, c: &mut Counters) -> Vec<LineHit<S>> {
        let mut out = Vec::new();
        self.report_above_into(self.walk(x, c), y, &mut out, c);
        out
    }

    /// Reports from an already positioned walk; stops at the first layer
    /// whose top line is below `y`.
    pub fn report_above_into(
        &self,
        mut walk: LayerWalk<S>,
        y: S,
        out: &mut Vec<LineHit<S>>,
        c: &mut Counters,
    ) {
        let x = walk.x;
        let start = out.len();
        while let Some((layer, top)) = walk.next(self, c) {
            let chain = self.layers[layer].lines();
            c.comparisons += 1;
            if chain[top].eval(x) < y {
                break;
            }
            out.push(self.hit(layer, top, x));
            let mut p = top;
            while p > 0 {
                c.comparisons += 1;
                if chain[p - 1].eval(x) < y {
                    break;
                }
                p -= 1;
                out.push(self.hit(layer, p, x));
            }
            let mut p = top + 1;
            while p < chain.len() {
                c.comparisons += 1;
                if chain[p].eval(x) < y {
                    break;
                }
                out.push(self.hit(layer, p, x));
                p += 1;
            }
        }
        c.reported += (out.len() - start) as u64;
    }

    pub fn topk(
        &self,
        x: S,
        k: usize,
        engine: Engine,
        c: &mut Counters,
    ) -> Result<Vec<LineHit<S>>> {
        if k == 0 || k > self.size {
            return Err(Error::KOutOfRange(k, self.size));
        }
        multi_topk(
            &mut [Source {
                index: self,
                walk: self.walk(x, c),
            }],
            k,
            engine,
            c,
        )
    }
}

/// Lazy iterator over the top line of each layer at a fixed `x`.
#[derive(Debug, Clone, Copy)]
pub struct LayerWalk<S> {
    cursor: Option<Cursor>,
    x: S,
}

impl<S: Scalar> LayerWalk<S> {
    pub fn x(&self) -> S {
        self.x
    }

    /// Next `(layer, position of the top line)`.
    pub fn next(
        &mut self,
        index: &LayeredHalfplaneIndex<S>,
        c: &mut Counters,
    ) -> Option<(usize, usize)> {
        let cur = self.cursor?;
        let layer = cur.node;
        let rank = index.cascade.own_rank(cur);
        let top = index.layers[layer].settle(rank, self.x, c);
        #[cfg(debug_assertions)]
        {
            let chain = &index.layers[layer];
            let searched = chain.locate(self.x, &mut Counters::default());
            debug_assert!(
                chain.lines()[top].eval(self.x) == chain.lines()[searched].eval(self.x),
                "cascaded walk disagrees with binary search on layer {layer}"
            );
        }
        self.cursor = if layer + 1 < index.layers.len() {
            Some(index.cascade.descend(cur, 0, self.x, c))
        } else {
            None
        };
        Some((layer, top))
    }
}

/// One index taking part in a multi-index top-k, with its positioned walk.
#[derive(Debug, Clone, Copy)]
pub struct Source<'a, S> {
    pub index: &'a LayeredHalfplaneIndex<S>,
    pub walk: LayerWalk<S>,
}

/// Layer tops of one source as a lazily extended sorted stream.
struct TopStream<'a, S> {
    src: Source<'a, S>,
    tops: Vec<(usize, S)>,
}

impl<S: Scalar> SortedStream<S> for TopStream<'_, S> {
    fn len(&self) -> usize {
        self.src.index.layer_count()
    }
    fn get(&mut self, i: usize, c: &mut Counters) -> S {
        while self.tops.len() <= i {
            let (layer, top) = self.src.walk.next(self.src.index, c).expect("layer exists");
            let h = self.src.index.line(layer, top).eval(self.src.walk.x);
            self.tops.push((top, h));
        }
        self.tops[i].1
    }
}

/// A run of one layer starting at `start` and moving by `dir`.
struct RunStream<'a, S> {
    chain: &'a [Line<S>],
    start: usize,
    right: bool,
    len: usize,
    x: S,
}

impl<S: Scalar> RunStream<'_, S> {
    fn pos(&self, i: usize) -> usize {
        if self.right {
            self.start + i
        } else {
            self.start - i
        }
    }
}

impl<S: Scalar> SortedStream<S> for RunStream<'_, S> {
    fn len(&self) -> usize {
        self.len
    }
    fn get(&mut self, i: usize, _c: &mut Counters) -> S {
        self.chain[self.pos(i)].eval(self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Top,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy)]
struct Cand<S> {
    hit: LineHit<S>,
    src: usize,
    layer: usize,
    pos: usize,
    side: Side,
}

impl<S: Scalar> PartialEq for Cand<S> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<S: Scalar> Eq for Cand<S> {}
impl<S: Scalar> PartialOrd for Cand<S> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<S: Scalar> Ord for Cand<S> {
    fn cmp(&self, o: &Self) -> Ordering {
        hit_order(&o.hit, &self.hit)
            .then(o.src.cmp(&self.src))
            .then(o.layer.cmp(&self.layer))
            .then(o.pos.cmp(&self.pos))
    }
}

/// The `k` highest lines over all sources at their common `x`, best first.
/// `k` is clamped to the total number of lines.
pub fn multi_topk<S: Scalar>(
    sources: &mut [Source<'_, S>],
    k: usize,
    engine: Engine,
    c: &mut Counters,
) -> Result<Vec<LineHit<S>>> {
    let total: usize = sources.iter().map(|s| s.index.len()).sum();
    let k = k.min(total);
    if k == 0 {
        return Ok(Vec::new());
    }
    match engine {
        Engine::Heap => Ok(heap_topk(sources, k, c)),
        Engine::Select | Engine::Block => {
            let layer_total: usize = sources.iter().map(|s| s.index.layer_count()).sum();
            let mut tops: Vec<TopStream<'_, S>> = sources
                .iter()
                .map(|s| TopStream {
                    src: *s,
                    tops: Vec::new(),
                })
                .collect();
            let want = k.min(layer_total);
            let counts: Vec<usize> = if engine == Engine::Select {
                select_top(&mut tops, want, c)?
            } else {
                let mut counts = vec![0; tops.len()];
                for p in block_heap_topk(&mut tops, want, default_block(total), c)? {
                    counts[p.stream] += 1;
                }
                counts
            };
            Ok(runs_topk(&mut tops, &counts, k, c)?)
        }
    }
}

/// Top `k` among the runs of the first `counts[v]` layers of every source.
fn runs_topk<'a, S: Scalar>(
    tops: &mut [TopStream<'a, S>],
    counts: &[usize],
    k: usize,
    c: &mut Counters,
) -> Result<Vec<LineHit<S>>> {
    let mut runs: Vec<RunStream<'a, S>> = Vec::new();
    let mut origin: Vec<(usize, usize)> = Vec::new();
    for (v, ts) in tops.iter_mut().enumerate() {
        for layer in 0..counts[v] {
            ts.get(layer, c);
            let (top, _) = ts.tops[layer];
            let index: &'a LayeredHalfplaneIndex<S> = ts.src.index;
            let chain = index.layers[layer].lines();
            let x = ts.src.walk.x;
            runs.push(RunStream {
                chain,
                start: top,
                right: true,
                len: (chain.len() - top).min(k),
                x,
            });
            origin.push((v, layer));
            if top > 0 {
                runs.push(RunStream {
                    chain,
                    start: top - 1,
                    right: false,
                    len: top.min(k),
                    x,
                });
                origin.push((v, layer));
            }
        }
    }
    let picks = select_merge_topk(&mut runs, k, c)?;
    let mut out: Vec<LineHit<S>> = picks
        .iter()
        .map(|p| {
            let line = runs[p.stream].chain[runs[p.stream].pos(p.pos)];
            LineHit {
                height: p.value,
                line,
            }
        })
        .collect();
    out.sort_by(hit_order);
    Ok(out)
}

fn heap_topk<S: Scalar>(
    sources: &mut [Source<'_, S>],
    k: usize,
    c: &mut Counters,
) -> Vec<LineHit<S>> {
    let mut heap: BinaryHeap<Cand<S>> = BinaryHeap::new();
    let push_top = |heap: &mut BinaryHeap<Cand<S>>,
                    sources: &mut [Source<'_, S>],
                    src: usize,
                    c: &mut Counters| {
        let s = &mut sources[src];
        if let Some((layer, pos)) = s.walk.next(s.index, c) {
            heap.push(Cand {
                hit: s.index.hit(layer, pos, s.walk.x),
                src,
                layer,
                pos,
                side: Side::Top,
            });
            c.heap_ops += 1;
        }
    };
    for src in 0..sources.len() {
        push_top(&mut heap, sources, src, c);
    }
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let Some(cand) = heap.pop() else { break };
        c.heap_ops += 1;
        c.extract_max += 1;
        out.push(cand.hit);
        let s = sources[cand.src];
        let len = s.index.layers[cand.layer].len();
        let mut push = |pos: usize, side: Side, c: &mut Counters| {
            heap.push(Cand {
                hit: s.index.hit(cand.layer, pos, s.walk.x),
                src: cand.src,
                layer: cand.layer,
                pos,
                side,
            });
            c.heap_ops += 1;
        };
        if matches!(cand.side, Side::Top | Side::Left) && cand.pos > 0 {
            push(cand.pos - 1, Side::Left, c);
        }
        if matches!(cand.side, Side::Top | Side::Right) && cand.pos + 1 < len {
            push(cand.pos + 1, Side::Right, c);
        }
        if cand.side == Side::Top {
            push_top(&mut heap, sources, cand.src, c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn l(a: f64, b: f64, id: u64) -> Line<f64> {
        Line::new(a, b, id)
    }

    fn random_lines(rng: &mut impl Rng, n: usize) -> Vec<Line<f64>> {
        (0..n)
            .map(|i| l(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), i as u64))
            .collect()
    }

    fn brute_topk(lines: &[Line<f64>], x: f64, k: usize) -> Vec<(f64, u64)> {
        let mut v: Vec<(f64, u64)> = lines.iter().map(|l| (l.eval(x), l.owner)).collect();
        v.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        v.truncate(k);
        v
    }

    fn pairs(h: &[LineHit<f64>]) -> Vec<(f64, u64)> {
        h.iter().map(|h| (h.height, h.line.owner)).collect()
    }

    #[test]
    fn build_examples() {
        let one = LayeredHalfplaneIndex::build(&[l(1.0, 0.0, 1)]).unwrap();
        assert_eq!(one.layer_count(), 1);
        let four = [
            l(0.0, 0.0, 1),
            l(0.0, 1.0, 2),
            l(1.0, 0.0, 3),
            l(-1.0, 0.0, 4),
        ];
        let idx = LayeredHalfplaneIndex::build(&four).unwrap();
        assert_eq!(idx.layer_count(), 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let big = LayeredHalfplaneIndex::build(&random_lines(&mut rng, 1000)).unwrap();
        assert_eq!(big.layers().iter().map(|l| l.len()).sum::<usize>(), 1000);
        assert_eq!(
            LayeredHalfplaneIndex::<f64>::build(&[]).unwrap_err(),
            Error::EmptyInput
        );
    }

    #[test]
    fn walk_yields_layer_tops() {
        let four = [
            l(0.0, 0.0, 1),
            l(0.0, 1.0, 2),
            l(1.0, 0.0, 3),
            l(-1.0, 0.0, 4),
        ];
        let idx = LayeredHalfplaneIndex::build(&four).unwrap();
        let mut c = Counters::default();
        let mut w = idx.walk(0.5, &mut c);
        let mut owners = Vec::new();
        while let Some((layer, pos)) = w.next(&idx, &mut c) {
            owners.push(idx.line(layer, pos).owner);
        }
        assert_eq!(owners, vec![2, 1]);
    }

    #[test]
    fn walk_matches_per_layer_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let lines = random_lines(&mut rng, 500);
        let idx = LayeredHalfplaneIndex::build(&lines).unwrap();
        for _ in 0..100 {
            let x = rng.gen_range(-6.0..6.0);
            let mut c = Counters::default();
            let mut w = idx.walk(x, &mut c);
            let mut visited = 0;
            while let Some((layer, pos)) = w.next(&idx, &mut c) {
                let mut c2 = Counters::default();
                assert_eq!(pos, idx.layers()[layer].locate(x, &mut c2));
                visited += 1;
            }
            assert_eq!(visited, idx.layer_count());
            assert!(
                c.bridge_steps <= 3 * visited as u64,
                "bridge steps {}",
                c.bridge_steps
            );
        }
    }

    #[test]
    fn report_above_examples() {
        let idx = LayeredHalfplaneIndex::build(&[l(0.0, 0.0, 1), l(0.0, 1.0, 2)]).unwrap();
        let mut c = Counters::default();
        assert!(idx.report_above(0.0, 5.0, &mut c).is_empty());
        assert_eq!(idx.report_above(0.0, -1.0, &mut c).len(), 2);
    }

    #[test]
    fn report_above_matches_filter() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let lines = random_lines(&mut rng, 1000);
        let idx = LayeredHalfplaneIndex::build(&lines).unwrap();
        for _ in 0..200 {
            let (x, y) = (rng.gen_range(-6.0..6.0), rng.gen_range(-10.0..10.0));
            let mut c = Counters::default();
            let mut got: Vec<u64> = idx
                .report_above(x, y, &mut c)
                .iter()
                .map(|h| h.line.owner)
                .collect();
            got.sort();
            let want: Vec<u64> = lines
                .iter()
                .filter(|l| l.eval(x) >= y)
                .map(|l| l.owner)
                .collect();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn report_above_exhaustive_small_integers() {
        // integer coefficients and query coordinates keep every evaluation exact
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let n = rng.gen_range(1..=12);
            let lines: Vec<_> = (0..n)
                .map(|i| {
                    l(
                        rng.gen_range(-3..=3) as f64,
                        rng.gen_range(-3..=3) as f64,
                        i,
                    )
                })
                .collect();
            let idx = LayeredHalfplaneIndex::build(&lines).unwrap();
            for x in -4..=4 {
                for y in -12..=12 {
                    let (x, y) = (x as f64, y as f64);
                    let mut c = Counters::default();
                    let mut got: Vec<u64> = idx
                        .report_above(x, y, &mut c)
                        .iter()
                        .map(|h| h.line.owner)
                        .collect();
                    got.sort();
                    let want: Vec<u64> = lines
                        .iter()
                        .filter(|l| l.eval(x) >= y)
                        .map(|l| l.owner)
                        .collect();
                    assert_eq!(got, want, "x={x} y={y} lines={lines:?}");
                }
            }
        }
    }

    #[test]
    fn topk_example_and_full_sort() {
        let four = [
            l(0.0, 0.0, 1),
            l(0.0, 1.0, 2),
            l(1.0, 0.0, 3),
            l(-1.0, 0.0, 4),
        ];
        let idx = LayeredHalfplaneIndex::build(&four).unwrap();
        let mut c = Counters::default();
        for e in Engine::ALL {
            let got = idx.topk(0.5, 2, e, &mut c).unwrap();
            assert_eq!(pairs(&got), vec![(1.0, 2), (0.5, 3)], "{e}");
            assert_eq!(
                pairs(&idx.topk(0.5, 4, e, &mut c).unwrap()),
                brute_topk(&four, 0.5, 4)
            );
            assert_eq!(idx.topk(0.5, 1, e, &mut c).unwrap()[0].line.owner, 2);
        }
        assert_eq!(
            idx.topk(0.5, 5, Engine::Heap, &mut c).unwrap_err(),
            Error::KOutOfRange(5, 4)
        );
    }

    #[test]
    fn engines_agree_with_sort() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let n = rng.gen_range(1..400);
            let lines = random_lines(&mut rng, n);
            let idx = LayeredHalfplaneIndex::build(&lines).unwrap();
            for _ in 0..50 {
                let x = rng.gen_range(-6.0..6.0);
                let k = rng.gen_range(1..=n);
                let want = brute_topk(&lines, x, k);
                for e in Engine::ALL {
                    let mut c = Counters::default();
                    assert_eq!(
                        pairs(&idx.topk(x, k, e, &mut c).unwrap()),
                        want,
                        "engine {e} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn multi_source_engines_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let groups: Vec<Vec<Line<f64>>> = (0..rng.gen_range(1..6))
                .map(|g| {
                    let n = rng.gen_range(1..60);
                    (0..n)
                        .map(|i| {
                            l(
                                rng.gen_range(-4.0..4.0),
                                rng.gen_range(-4.0..4.0),
                                (g * 100 + i) as u64,
                            )
                        })
                        .collect()
                })
                .collect();
            let idx: Vec<_> = groups
                .iter()
                .map(|g| LayeredHalfplaneIndex::build(g).unwrap())
                .collect();
            let all: Vec<Line<f64>> = groups.concat();
            for _ in 0..20 {
                let x = rng.gen_range(-6.0..6.0);
                let k = rng.gen_range(1..=all.len());
                let want = brute_topk(&all, x, k);
                for e in Engine::ALL {
                    let mut c = Counters::default();
                    let mut srcs: Vec<Source<f64>> = idx
                        .iter()
                        .map(|i| Source {
                            index: i,
                            walk: i.walk(x, &mut c),
                        })
                        .collect();
                    assert_eq!(
                        pairs(&multi_topk(&mut srcs, k, e, &mut c).unwrap()),
                        want,
                        "engine {e}"
                    );
                }
            }
        }
    }
}
