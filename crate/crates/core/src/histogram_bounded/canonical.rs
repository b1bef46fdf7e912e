//! Canonical plane sets: a segment tree over the left-endpoint slabs whose
//! nodes carry a segment tree over the right-endpoint slabs.
//!
//! For a point with cdf pieces `i` (active at `x_l`) and `j` (active at
//! `x_r`), `Pr = (a_j x_r + b_j) - (a_i x_l + b_i)` on the rectangle of the
//! two piece extents. Every pair `i <= j` becomes one plane, stored at the
//! outer nodes covering piece `i`'s extent and, inside each, at the inner
//! nodes covering piece `j`'s extent. The sets on the outer path of `x_l`
//! crossed with the inner paths of `x_r` hold one plane per point.

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::geom::{Plane3, ProjectedPlaneEnvelope, Slabs, TreeShape};
use crate::model::{CdfPiece, PointId, UncertainPoint};
use crate::scalar::{cmp, Scalar};

/// Sets up to this size are scanned instead of getting an envelope.
const SCAN_SIZE: usize = 16;

/// The plane of one piece pair of one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairPlane<S> {
    /// Piece active at `x_l`.
    pub left: CdfPiece<S>,
    /// Piece active at `x_r`.
    pub right: CdfPiece<S>,
    pub owner: PointId,
    /// `(i << 16) | j`.
    pub tag: u32,
}

impl<S: Scalar> PairPlane<S> {
    /// `F(x_r) - F(x_l)` before clamping, evaluated exactly as the model does.
    #[inline]
    pub fn value(&self, x_l: S, x_r: S) -> S {
        self.right.eval(x_r) - self.left.eval(x_l)
    }

    pub fn plane(&self) -> Plane3<S> {
        Plane3 {
            alpha: -self.left.slope,
            beta: self.right.slope,
            gamma: self.right.intercept - self.left.intercept,
            owner: self.owner,
            tag: self.tag,
        }
    }

    pub fn pieces(&self) -> (usize, usize) {
        ((self.tag >> 16) as usize, (self.tag & 0xffff) as usize)
    }
}

/// Planes of every piece pair `i <= j` of `p`.
pub fn pair_planes<S: Scalar>(p: &UncertainPoint<S>) -> Vec<PairPlane<S>> {
    let cdf = p.cdf();
    let m = cdf.piece_count();
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in i..m {
            out.push(PairPlane {
                left: cdf.piece(i),
                right: cdf.piece(j),
                owner: p.id,
                tag: ((i as u32) << 16) | j as u32,
            });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct CanonicalPlaneSet<S> {
    /// Indexes into the tree's plane table.
    members: Vec<u32>,
    envelope: Option<ProjectedPlaneEnvelope<S>>,
}

impl<S: Scalar> CanonicalPlaneSet<S> {
    pub(crate) fn from_members(members: Vec<u32>, planes: &[PairPlane<S>]) -> Result<Self> {
        let envelope = if members.len() > SCAN_SIZE {
            let ps: Vec<Plane3<S>> = members
                .iter()
                .map(|&m| planes[m as usize].plane())
                .collect();
            Some(ProjectedPlaneEnvelope::build(&ps)?)
        } else {
            None
        };
        Ok(Self { members, envelope })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn envelope(&self) -> Option<&ProjectedPlaneEnvelope<S>> {
        self.envelope.as_ref()
    }

    /// Highest member at `(x_l, x_r)` and its plane height.
    pub fn locate_max(
        &self,
        planes: &[PairPlane<S>],
        x_l: S,
        x_r: S,
        c: &mut Counters,
    ) -> (u32, S) {
        match &self.envelope {
            Some(env) => {
                let (at, z) = env.locate(x_l, x_r, c);
                (self.members[at], z)
            }
            None => {
                c.comparisons += self.members.len() as u64;
                self.members
                    .iter()
                    .map(|&m| (m, planes[m as usize].plane().z(x_l, x_r)))
                    .max_by(|a, b| cmp(a.1, b.1))
                    .expect("sets are non-empty")
            }
        }
    }

    /// The `t` highest members at `(x_l, x_r)` by exact value, descending,
    /// ties by owner. A partial selection over the whole set.
    pub fn t_highest(
        &self,
        planes: &[PairPlane<S>],
        x_l: S,
        x_r: S,
        t: usize,
        c: &mut Counters,
    ) -> Result<Vec<u32>> {
        if self.members.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut vals: Vec<(S, PointId, u32)> = self
            .members
            .iter()
            .map(|&m| {
                let p = &planes[m as usize];
                (p.value(x_l, x_r), p.owner, m)
            })
            .collect();
        c.comparisons += vals.len() as u64;
        let order =
            |a: &(S, PointId, u32), b: &(S, PointId, u32)| cmp(b.0, a.0).then(a.1.cmp(&b.1));
        let t = t.min(vals.len());
        if t < vals.len() {
            vals.select_nth_unstable_by(t, order);
            vals.truncate(t);
        }
        vals.sort_by(order);
        Ok(vals.into_iter().map(|v| v.2).collect())
    }
}

#[derive(Debug, Clone)]
struct Inner<S> {
    slabs: Slabs<S>,
    shape: TreeShape,
    /// Set index per inner node.
    set_of: Vec<u32>,
}

const NO_SET: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct CanonicalTree<S> {
    planes: Vec<PairPlane<S>>,
    x_slabs: Slabs<S>,
    outer: TreeShape,
    inner: Vec<Option<Inner<S>>>,
    sets: Vec<CanonicalPlaneSet<S>>,
}

impl<S: Scalar> CanonicalTree<S> {
    pub fn build(points: &[UncertainPoint<S>]) -> Result<Self> {
        let planes: Vec<PairPlane<S>> = points.iter().flat_map(pair_planes).collect();
        let x_slabs = Slabs::new(points.iter().flat_map(|p| p.cdf().breaks().iter().copied()));
        let outer = TreeShape::new(x_slabs.count());
        let mut at_outer: Vec<Vec<u32>> = vec![Vec::new(); outer.len()];
        for (k, p) in planes.iter().enumerate() {
            for u in outer.canonical(x_slabs.span(p.left.lo, p.left.hi)) {
                at_outer[u].push(k as u32);
            }
        }
        let mut inner = Vec::with_capacity(outer.len());
        let mut sets = Vec::new();
        for members in at_outer {
            if members.is_empty() {
                inner.push(None);
                continue;
            }
            let ys = Slabs::new(
                members
                    .iter()
                    .flat_map(|&m| [planes[m as usize].right.lo, planes[m as usize].right.hi]),
            );
            let shape = TreeShape::new(ys.count());
            let mut at_inner: Vec<Vec<u32>> = vec![Vec::new(); shape.len()];
            for &m in &members {
                let p = &planes[m as usize];
                for w in shape.canonical(ys.span(p.right.lo, p.right.hi)) {
                    at_inner[w].push(m);
                }
            }
            let mut set_of = vec![NO_SET; shape.len()];
            for (w, ms) in at_inner.into_iter().enumerate() {
                if !ms.is_empty() {
                    set_of[w] = sets.len() as u32;
                    sets.push(CanonicalPlaneSet::from_members(ms, &planes)?);
                }
            }
            inner.push(Some(Inner {
                slabs: ys,
                shape,
                set_of,
            }));
        }
        Ok(Self {
            planes,
            x_slabs,
            outer,
            inner,
            sets,
        })
    }

    pub fn planes(&self) -> &[PairPlane<S>] {
        &self.planes
    }

    pub fn sets(&self) -> &[CanonicalPlaneSet<S>] {
        &self.sets
    }

    /// Total plane copies over all sets.
    pub fn stored_copies(&self) -> usize {
        self.sets.iter().map(|s| s.len()).sum()
    }

    /// The family of sets for `x_l <= x_r`: outer path of `x_l`, inner
    /// paths of `x_r`.
    pub fn family(&self, x_l: S, x_r: S, c: &mut Counters) -> Vec<&CanonicalPlaneSet<S>> {
        c.comparisons += self.x_slabs.search_cost();
        let mut out = Vec::new();
        for u in self.outer.path(self.x_slabs.of(x_l)) {
            let Some(inn) = &self.inner[u] else { continue };
            c.comparisons += inn.slabs.search_cost();
            for w in inn.shape.path(inn.slabs.of(x_r)) {
                if inn.set_of[w] != NO_SET {
                    out.push(&self.sets[inn.set_of[w] as usize]);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{interval_probability, QueryInterval};
    use rand::SeedableRng;

    fn d2() -> Vec<UncertainPoint<f64>> {
        vec![
            UncertainPoint::histogram(1, vec![0.0, 1.0, 3.0], vec![0.5, 0.25]).unwrap(),
            UncertainPoint::histogram(2, vec![2.0, 4.0], vec![0.5]).unwrap(),
            UncertainPoint::histogram(3, vec![0.0, 2.0, 5.0, 6.0], vec![0.25, 0.0, 0.5]).unwrap(),
        ]
    }

    fn per_point(tree: &CanonicalTree<f64>, x_l: f64, x_r: f64) -> Vec<(u64, f64)> {
        let mut c = Counters::default();
        let mut out: Vec<(u64, f64)> = tree
            .family(x_l, x_r, &mut c)
            .iter()
            .flat_map(|s| s.members().iter().map(|&m| &tree.planes()[m as usize]))
            .map(|p| (p.owner, p.value(x_l, x_r)))
            .collect();
        out.sort_by_key(|a| a.0);
        out
    }

    #[test]
    fn d2_family_values() {
        let tree = CanonicalTree::build(&d2()).unwrap();
        assert_eq!(
            per_point(&tree, 1.0, 5.5),
            vec![(1, 0.5), (2, 1.0), (3, 0.5)]
        );
        let one = CanonicalTree::build(&d2()[..1]).unwrap();
        assert_eq!(one.planes().len(), 10);
        for (a, b) in [(-1.0, 0.5), (0.5, 0.5), (2.0, 9.0), (7.0, 8.0)] {
            assert_eq!(per_point(&one, a, b).len(), 1);
        }
    }

    #[test]
    fn one_plane_per_point_with_model_value() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let pts = crate::gen::histogram_points::<f64>(&mut rng, 60, 4, Some(1.0));
        let tree = CanonicalTree::build(&pts).unwrap();
        for _ in 0..500 {
            let iv = crate::gen::bounded_interval(&mut rng, &pts);
            let got = per_point(&tree, iv.lo, iv.hi);
            assert_eq!(got.len(), pts.len());
            for ((id, v), p) in got.iter().zip(&pts) {
                assert_eq!(*id, p.id);
                let clamped = v.clamp(0.0, 1.0);
                assert_eq!(
                    clamped,
                    interval_probability(p, &QueryInterval::new(iv.lo, iv.hi).unwrap())
                );
            }
        }
    }

    #[test]
    fn t_highest_and_locate_agree_with_sorting() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(72);
        let pts = crate::gen::histogram_points::<f64>(&mut rng, 300, 3, None);
        let tree = CanonicalTree::build(&pts).unwrap();
        let planes = tree.planes();
        let mut c = Counters::default();
        for _ in 0..200 {
            let iv = crate::gen::bounded_interval(&mut rng, &pts);
            let (x_l, x_r) = (iv.lo, iv.hi);
            for set in tree.family(x_l, x_r, &mut c) {
                let mut all: Vec<(f64, u64)> = set
                    .members()
                    .iter()
                    .map(|&m| (planes[m as usize].value(x_l, x_r), planes[m as usize].owner))
                    .collect();
                all.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                let full = set.t_highest(planes, x_l, x_r, set.len(), &mut c).unwrap();
                let got: Vec<(f64, u64)> = full
                    .iter()
                    .map(|&m| (planes[m as usize].value(x_l, x_r), planes[m as usize].owner))
                    .collect();
                assert_eq!(got, all);
                assert_eq!(
                    set.t_highest(planes, x_l, x_r, 1, &mut c).unwrap(),
                    full[..1].to_vec()
                );
                let (_, z) = set.locate_max(planes, x_l, x_r, &mut c);
                assert!((z - all[0].0).abs() <= 1e-12);
            }
        }
    }
}
