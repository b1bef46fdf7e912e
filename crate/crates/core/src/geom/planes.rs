//! Upper envelopes of planes `z = alpha * X + beta * Y + gamma`.
//!
//! In the dual a plane is the point `(alpha, beta, gamma)` and the highest
//! plane at `(X, Y)` is the hull vertex extreme in direction `(X, Y, 1)`.
//! The envelope keeps the convex hull of the dual points with its vertex
//! graph; location climbs the graph greedily, which ends at the global
//! maximum because a linear function has no local maxima on a convex
//! polytope other than the global one. Lower-dimensional inputs (one point,
//! collinear or coplanar dual points) get the matching smaller hull.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use robust::{orient2d, orient3d, Coord, Coord3D};

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::model::PointId;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane3<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub owner: PointId,
    pub tag: u32,
}

impl<S: Scalar> Plane3<S> {
    #[inline]
    pub fn z(&self, x: S, y: S) -> S {
        self.alpha * x + self.beta * y + self.gamma
    }
}

#[derive(Debug, Clone)]
pub struct ProjectedPlaneEnvelope<S> {
    /// Hull vertices: the planes that can be highest somewhere.
    planes: Vec<Plane3<S>>,
    /// Position of each vertex plane in the input slice.
    source: Vec<u32>,
    /// Vertex graph in compressed rows.
    adj_start: Vec<u32>,
    adj: Vec<u32>,
    start: usize,
}

type P3 = [f64; 3];

fn c3(p: &P3) -> Coord3D<f64> {
    Coord3D {
        x: p[0],
        y: p[1],
        z: p[2],
    }
}

fn o3(a: &P3, b: &P3, c: &P3, d: &P3) -> f64 {
    orient3d(c3(a), c3(b), c3(c), c3(d))
}

fn o2(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    orient2d(
        Coord { x: a[0], y: a[1] },
        Coord { x: b[0], y: b[1] },
        Coord { x: c[0], y: c[1] },
    )
}

fn sub(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &P3, b: &P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm2(a: &P3) -> f64 {
    a[0] * a[0] + a[1] * a[1] + a[2] * a[2]
}

/// Exact collinearity: every coordinate projection is degenerate.
fn collinear(a: &P3, b: &P3, c: &P3) -> bool {
    let proj = |p: &P3, i: usize, j: usize| [p[i], p[j]];
    [(0, 1), (1, 2), (0, 2)]
        .iter()
        .all(|&(i, j)| o2(proj(a, i, j), proj(b, i, j), proj(c, i, j)) == 0.0)
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Face {
    v: [u32; 3],
    nbr: [u32; 3],
    alive: bool,
    conflicts: Vec<u32>,
}

/// Vertex pairs of the hull edges, for affinely independent input.
fn hull3(pts: &[P3], seed: [usize; 4]) -> Vec<(u32, u32)> {
    let mut faces: Vec<Face> = Vec::new();
    let [a, b, c, d] = seed.map(|i| i as u32);
    let make = |v: [u32; 3], opp: u32, faces: &mut Vec<Face>| {
        let [x, mut y, mut z] = v;
        // outward means the opposite vertex is below
        if o3(
            &pts[x as usize],
            &pts[y as usize],
            &pts[z as usize],
            &pts[opp as usize],
        ) < 0.0
        {
            std::mem::swap(&mut y, &mut z);
        }
        faces.push(Face {
            v: [x, y, z],
            nbr: [NONE; 3],
            alive: true,
            conflicts: Vec::new(),
        });
    };
    make([a, b, c], d, &mut faces);
    make([a, b, d], c, &mut faces);
    make([a, c, d], b, &mut faces);
    make([b, c, d], a, &mut faces);
    let mut edges: HashMap<(u32, u32), (u32, usize)> = HashMap::new();
    for (f, face) in faces.iter().enumerate() {
        for e in 0..3 {
            edges.insert((face.v[e], face.v[(e + 1) % 3]), (f as u32, e));
        }
    }
    for face in faces.iter_mut() {
        for e in 0..3 {
            let (u, w) = (face.v[e], face.v[(e + 1) % 3]);
            face.nbr[e] = edges[&(w, u)].0;
        }
    }

    let visible = |f: &Face, p: u32| -> bool {
        o3(
            &pts[f.v[0] as usize],
            &pts[f.v[1] as usize],
            &pts[f.v[2] as usize],
            &pts[p as usize],
        ) < 0.0
    };
    let mut order: Vec<u32> = (0..pts.len() as u32)
        .filter(|p| !seed.contains(&(*p as usize)))
        .collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(pts.len() as u64);
    order.shuffle(&mut rng);
    let mut face_of = vec![NONE; pts.len()];
    for &p in &order {
        if let Some(f) = (0..4).find(|&f| visible(&faces[f], p)) {
            face_of[p as usize] = f as u32;
            faces[f].conflicts.push(p);
        }
    }

    let mut mark: Vec<u32> = vec![NONE; faces.len()];
    for &p in &order {
        let f0 = face_of[p as usize];
        if f0 == NONE {
            continue;
        }
        // visible region around the conflict face
        mark.resize(faces.len(), NONE);
        let mut region = vec![f0];
        mark[f0 as usize] = p;
        let mut i = 0;
        while i < region.len() {
            let f = region[i] as usize;
            i += 1;
            for e in 0..3 {
                let g = faces[f].nbr[e];
                if mark[g as usize] != p && visible(&faces[g as usize], p) {
                    mark[g as usize] = p;
                    region.push(g);
                }
            }
        }
        // horizon edges, one new face each
        let mut created: Vec<u32> = Vec::new();
        let mut starts_at: HashMap<u32, u32> = HashMap::new();
        for &f in &region {
            for e in 0..3 {
                let g = faces[f as usize].nbr[e];
                if mark[g as usize] == p {
                    continue;
                }
                let (u, w) = (faces[f as usize].v[e], faces[f as usize].v[(e + 1) % 3]);
                let nf = faces.len() as u32;
                faces.push(Face {
                    v: [u, w, p],
                    nbr: [g, NONE, NONE],
                    alive: true,
                    conflicts: Vec::new(),
                });
                let slot = (0..3)
                    .find(|&s| faces[g as usize].nbr[s] == f)
                    .expect("neighbor link");
                faces[g as usize].nbr[slot] = nf;
                starts_at.insert(u, nf);
                created.push(nf);
            }
        }
        for &nf in &created {
            let next = starts_at[&faces[nf as usize].v[1]];
            faces[nf as usize].nbr[1] = next;
            faces[next as usize].nbr[2] = nf;
        }
        mark.resize(faces.len(), NONE);
        let mut orphans = Vec::new();
        for &f in &region {
            let face = &mut faces[f as usize];
            face.alive = false;
            orphans.append(&mut face.conflicts);
        }
        for q in orphans {
            if q == p {
                continue;
            }
            let home = created
                .iter()
                .copied()
                .find(|&nf| visible(&faces[nf as usize], q))
                .or_else(|| {
                    (0..faces.len() as u32)
                        .find(|&g| faces[g as usize].alive && visible(&faces[g as usize], q))
                });
            face_of[q as usize] = home.unwrap_or(NONE);
            if let Some(h) = home {
                faces[h as usize].conflicts.push(q);
            }
        }
        face_of[p as usize] = NONE;
    }

    let mut out = Vec::new();
    for face in faces.iter().filter(|f| f.alive) {
        for e in 0..3 {
            let (u, w) = (face.v[e], face.v[(e + 1) % 3]);
            if u < w {
                out.push((u, w));
            }
        }
    }
    out
}

/// Edges of the 2D hull (a cycle) of coplanar points, projected along the
/// dominant normal axis.
fn hull2(pts: &[P3], normal: P3) -> Vec<(u32, u32)> {
    let drop = (0..3)
        .max_by(|&i, &j| normal[i].abs().total_cmp(&normal[j].abs()))
        .unwrap();
    let (ax, ay) = match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let q: Vec<[f64; 2]> = pts.iter().map(|p| [p[ax], p[ay]]).collect();
    let mut idx: Vec<u32> = (0..pts.len() as u32).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (q[a as usize], q[b as usize]);
        pa[0].total_cmp(&pb[0]).then(pa[1].total_cmp(&pb[1]))
    });
    let mut lower: Vec<u32> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2
            && o2(
                q[lower[lower.len() - 2] as usize],
                q[lower[lower.len() - 1] as usize],
                q[i as usize],
            ) <= 0.0
        {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<u32> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2
            && o2(
                q[upper[upper.len() - 2] as usize],
                q[upper[upper.len() - 1] as usize],
                q[i as usize],
            ) <= 0.0
        {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let h = lower.len();
    (0..h).map(|i| (lower[i], lower[(i + 1) % h])).collect()
}

impl<S: Scalar> ProjectedPlaneEnvelope<S> {
    pub fn build(planes: &[Plane3<S>]) -> Result<Self> {
        if planes.is_empty() {
            return Err(Error::EmptyInput);
        }
        // identical dual points: keep the smallest owner
        let mut order: Vec<usize> = (0..planes.len()).collect();
        let key = |p: &Plane3<S>| [p.alpha.as_f64(), p.beta.as_f64(), p.gamma.as_f64()];
        order.sort_by(|&a, &b| {
            let (ka, kb) = (key(&planes[a]), key(&planes[b]));
            ka[0]
                .total_cmp(&kb[0])
                .then(ka[1].total_cmp(&kb[1]))
                .then(ka[2].total_cmp(&kb[2]))
                .then((planes[a].owner, planes[a].tag).cmp(&(planes[b].owner, planes[b].tag)))
        });
        order.dedup_by(|b, a| key(&planes[*a]) == key(&planes[*b]));
        let pts: Vec<P3> = order.iter().map(|&i| key(&planes[i])).collect();

        let p0 = 0;
        let far = |from: &P3| {
            (0..pts.len())
                .max_by(|&i, &j| norm2(&sub(&pts[i], from)).total_cmp(&norm2(&sub(&pts[j], from))))
        };
        let edges: Vec<(u32, u32)> = match far(&pts[p0]).filter(|&i| i != p0) {
            None => Vec::new(),
            Some(p1) => {
                let d = sub(&pts[p1], &pts[p0]);
                let p2 = (0..pts.len())
                    .filter(|&i| !collinear(&pts[p0], &pts[p1], &pts[i]))
                    .max_by(|&i, &j| {
                        norm2(&cross(&d, &sub(&pts[i], &pts[p0])))
                            .total_cmp(&norm2(&cross(&d, &sub(&pts[j], &pts[p0]))))
                    });
                match p2 {
                    None => {
                        // collinear: the two ends of the segment
                        let t = |i: usize| {
                            let v = sub(&pts[i], &pts[p0]);
                            v[0] * d[0] + v[1] * d[1] + v[2] * d[2]
                        };
                        let lo = (0..pts.len())
                            .min_by(|&i, &j| t(i).total_cmp(&t(j)))
                            .unwrap();
                        let hi = (0..pts.len())
                            .max_by(|&i, &j| t(i).total_cmp(&t(j)))
                            .unwrap();
                        vec![(lo as u32, hi as u32)]
                    }
                    Some(p2) => {
                        let p3 = (0..pts.len())
                            .filter(|&i| o3(&pts[p0], &pts[p1], &pts[p2], &pts[i]) != 0.0)
                            .max_by(|&i, &j| {
                                o3(&pts[p0], &pts[p1], &pts[p2], &pts[i])
                                    .abs()
                                    .total_cmp(&o3(&pts[p0], &pts[p1], &pts[p2], &pts[j]).abs())
                            });
                        match p3 {
                            None => hull2(&pts, cross(&d, &sub(&pts[p2], &pts[p0]))),
                            Some(p3) => hull3(&pts, [p0, p1, p2, p3]),
                        }
                    }
                }
            }
        };

        // compact to the vertices that appear on an edge
        let mut local = vec![NONE; pts.len()];
        let mut verts: Vec<usize> = Vec::new();
        let mut touch = |v: u32, verts: &mut Vec<usize>| {
            if local[v as usize] == NONE {
                local[v as usize] = verts.len() as u32;
                verts.push(v as usize);
            }
            local[v as usize]
        };
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, w) in &edges {
            let (a, b) = (touch(u, &mut verts), touch(w, &mut verts));
            pairs.push((a, b));
        }
        if verts.is_empty() {
            verts.push(0);
        }
        let mut deg = vec![0u32; verts.len() + 1];
        for &(a, b) in &pairs {
            deg[a as usize + 1] += 1;
            deg[b as usize + 1] += 1;
        }
        for i in 1..deg.len() {
            deg[i] += deg[i - 1];
        }
        let mut fill = deg.clone();
        let mut adj = vec![0u32; 2 * pairs.len()];
        for &(a, b) in &pairs {
            adj[fill[a as usize] as usize] = b;
            fill[a as usize] += 1;
            adj[fill[b as usize] as usize] = a;
            fill[b as usize] += 1;
        }
        let source: Vec<u32> = verts.iter().map(|&v| order[v] as u32).collect();
        let vplanes: Vec<Plane3<S>> = source.iter().map(|&s| planes[s as usize]).collect();
        let start = (0..vplanes.len())
            .max_by(|&i, &j| crate::scalar::cmp(vplanes[i].gamma, vplanes[j].gamma))
            .unwrap();
        Ok(Self {
            planes: vplanes,
            source,
            adj_start: deg,
            adj,
            start,
        })
    }

    /// Number of planes on the hull.
    pub fn len(&self) -> usize {
        self.planes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planes.is_empty()
    }

    pub fn planes(&self) -> &[Plane3<S>] {
        &self.planes
    }

    /// Highest plane at `(x, y)`: its position in the input and its height.
    pub fn locate(&self, x: S, y: S, c: &mut Counters) -> (usize, S) {
        let mut v = self.start;
        let mut best = self.planes[v].z(x, y);
        loop {
            let mut next = v;
            for &w in &self.adj[self.adj_start[v] as usize..self.adj_start[v + 1] as usize] {
                c.comparisons += 1;
                let z = self.planes[w as usize].z(x, y);
                if z > best {
                    best = z;
                    next = w as usize;
                }
            }
            if next == v {
                return (self.source[v] as usize, best);
            }
            c.bridge_steps += 1;
            v = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn plane(a: f64, b: f64, g: f64, owner: u64) -> Plane3<f64> {
        Plane3 {
            alpha: a,
            beta: b,
            gamma: g,
            owner,
            tag: 0,
        }
    }

    fn scan(planes: &[Plane3<f64>], x: f64, y: f64) -> f64 {
        planes
            .iter()
            .map(|p| p.z(x, y))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn small_examples() {
        let mut c = Counters::default();
        let env =
            ProjectedPlaneEnvelope::build(&[plane(0.0, 0.0, 1.0, 1), plane(1.0, 0.0, 0.0, 2)])
                .unwrap();
        assert_eq!(env.locate(2.0, 0.0, &mut c), (1, 2.0));
        let one = ProjectedPlaneEnvelope::build(&[plane(0.5, -1.0, 3.0, 9)]).unwrap();
        assert_eq!(one.locate(-7.0, 2.0, &mut c), (0, -2.5));
        assert_eq!(
            ProjectedPlaneEnvelope::<f64>::build(&[]).unwrap_err(),
            Error::EmptyInput
        );
    }

    #[test]
    fn random_planes_match_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for m in [2, 3, 4, 5, 10, 100, 1000] {
            let planes: Vec<Plane3<f64>> = (0..m)
                .map(|i| {
                    plane(
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        i,
                    )
                })
                .collect();
            let env = ProjectedPlaneEnvelope::build(&planes).unwrap();
            let mut c = Counters::default();
            for _ in 0..1000 {
                let (x, y) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
                let (at, z) = env.locate(x, y, &mut c);
                assert_eq!(planes[at].z(x, y), z);
                assert_eq!(z, scan(&planes, x, y), "m={m}");
            }
        }
    }

    #[test]
    fn degenerate_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(62);
        let mut c = Counters::default();
        // coplanar duals: alpha = 0
        let flat: Vec<Plane3<f64>> = (0..50)
            .map(|i| {
                plane(
                    0.0,
                    rng.gen_range(-2..=2) as f64,
                    rng.gen_range(-2..=2) as f64,
                    i,
                )
            })
            .collect();
        // collinear duals
        let line: Vec<Plane3<f64>> = (0..20)
            .map(|i| plane(i as f64, 2.0 * i as f64, 1.0, i))
            .collect();
        // integer grid with repeats and coplanar faces
        let grid: Vec<Plane3<f64>> = (0..300)
            .map(|i| {
                plane(
                    rng.gen_range(-2..=2) as f64,
                    rng.gen_range(-2..=2) as f64,
                    rng.gen_range(-2..=2) as f64,
                    i,
                )
            })
            .collect();
        let same: Vec<Plane3<f64>> = (0..5).map(|i| plane(1.0, 1.0, 1.0, 10 - i)).collect();
        for set in [flat, line, grid, same] {
            let env = ProjectedPlaneEnvelope::build(&set).unwrap();
            for _ in 0..500 {
                let (x, y) = (
                    rng.gen_range(-5..=5) as f64 * 0.5,
                    rng.gen_range(-5..=5) as f64 * 0.5,
                );
                assert_eq!(env.locate(x, y, &mut c).1, scan(&set, x, y));
            }
        }
    }
}
