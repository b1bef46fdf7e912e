//! Upper envelopes of every suffix of a line sequence, stored persistently.
//!
//! Lines are inserted from last to first into a treap keyed by slope; each
//! insertion copies only the root paths it touches, so every intermediate
//! envelope stays available as a version. A node stores the x-coordinate
//! where its line takes over from its predecessor, which makes point
//! location a single root-to-leaf descent.

use std::rc::Rc;

use crate::counters::Counters;
use crate::scalar::Scalar;

use super::envelope::Line;

type Link<S> = Option<Rc<Node<S>>>;

#[derive(Debug)]
struct Node<S> {
    line: Line<S>,
    /// Left breakpoint: where this line becomes the envelope.
    lbp: S,
    prio: u64,
    left: Link<S>,
    right: Link<S>,
}

fn priority<S>(line: &Line<S>) -> u64 {
    // splitmix64 of the owner and tag: deterministic, well spread
    let mut z = line
        .owner
        .wrapping_add((line.tag as u64) << 48)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn with_children<S: Scalar>(n: &Node<S>, left: Link<S>, right: Link<S>) -> Link<S> {
    Some(Rc::new(Node {
        line: n.line,
        lbp: n.lbp,
        prio: n.prio,
        left,
        right,
    }))
}

/// Splits into (nodes where `goes_left` holds, the rest); `goes_left` must be
/// monotone in key order.
fn split<S: Scalar>(t: &Link<S>, goes_left: &impl Fn(&Line<S>) -> bool) -> (Link<S>, Link<S>) {
    match t {
        None => (None, None),
        Some(n) => {
            if goes_left(&n.line) {
                let (a, b) = split(&n.right, goes_left);
                (with_children(n, n.left.clone(), a), b)
            } else {
                let (a, b) = split(&n.left, goes_left);
                (a, with_children(n, b, n.right.clone()))
            }
        }
    }
}

fn merge<S: Scalar>(a: &Link<S>, b: &Link<S>) -> Link<S> {
    match (a, b) {
        (None, _) => b.clone(),
        (_, None) => a.clone(),
        (Some(x), Some(y)) => {
            if x.prio >= y.prio {
                with_children(x, x.left.clone(), merge(&x.right, b))
            } else {
                with_children(y, merge(a, &y.left), y.right.clone())
            }
        }
    }
}

/// Largest and second largest keys.
fn last_two<S: Scalar>(t: &Link<S>) -> (Option<Line<S>>, Option<Line<S>>) {
    let mut second = None;
    let mut cur = t.as_ref();
    let mut last = None;
    while let Some(n) = cur {
        if n.right.is_some() {
            second = Some(n.line);
            cur = n.right.as_ref();
        } else {
            last = Some(n.line);
            if let Some(mut l) = n.left.as_ref() {
                while let Some(r) = l.right.as_ref() {
                    l = r;
                }
                second = Some(l.line);
            }
            break;
        }
    }
    (last, second)
}

/// Smallest and second smallest keys.
fn first_two<S: Scalar>(t: &Link<S>) -> (Option<Line<S>>, Option<Line<S>>) {
    let mut second = None;
    let mut cur = t.as_ref();
    let mut first = None;
    while let Some(n) = cur {
        if n.left.is_some() {
            second = Some(n.line);
            cur = n.left.as_ref();
        } else {
            first = Some(n.line);
            if let Some(mut r) = n.right.as_ref() {
                while let Some(l) = r.left.as_ref() {
                    r = l;
                }
                second = Some(r.line);
            }
            break;
        }
    }
    (first, second)
}

fn remove_last<S: Scalar>(t: &Link<S>) -> Link<S> {
    let n = t.as_ref()?;
    match &n.right {
        None => n.left.clone(),
        Some(_) => with_children(n, n.left.clone(), remove_last(&n.right)),
    }
}

fn remove_first<S: Scalar>(t: &Link<S>) -> Link<S> {
    let n = t.as_ref()?;
    match &n.left {
        None => n.right.clone(),
        Some(_) => with_children(n, remove_first(&n.left), n.right.clone()),
    }
}

fn set_first_lbp<S: Scalar>(t: &Link<S>, lbp: S) -> Link<S> {
    let n = t.as_ref()?;
    match &n.left {
        None => Some(Rc::new(Node {
            line: n.line,
            lbp,
            prio: n.prio,
            left: None,
            right: n.right.clone(),
        })),
        Some(_) => with_children(n, set_first_lbp(&n.left, lbp), n.right.clone()),
    }
}

/// `b` is not on the envelope of `{a, b, c}` (slopes ascending).
#[inline]
fn hidden<S: Scalar>(a: &Line<S>, b: &Line<S>, c: &Line<S>) -> bool {
    b.meet_x(c) <= a.meet_x(b)
}

fn insert<S: Scalar>(t: &Link<S>, l: Line<S>) -> Link<S> {
    let (lt, ge) = split(t, &|m: &Line<S>| m.slope < l.slope);
    let (eq, gt) = split(&ge, &|m: &Line<S>| m.slope <= l.slope);
    if let Some(e) = &eq {
        if e.line.intercept > l.intercept
            || (e.line.intercept == l.intercept && e.line.owner < l.owner)
        {
            return t.clone();
        }
    }
    let (pred, _) = last_two(&lt);
    let (succ, _) = first_two(&gt);
    if let (Some(p), Some(s)) = (pred, succ) {
        if hidden(&p, &l, &s) {
            return t.clone();
        }
    }
    let mut lt = lt;
    while let (Some(p), Some(pp)) = last_two(&lt) {
        if !hidden(&pp, &p, &l) {
            break;
        }
        lt = remove_last(&lt);
    }
    let mut gt = gt;
    while let (Some(s), Some(ss)) = first_two(&gt) {
        if !hidden(&l, &s, &ss) {
            break;
        }
        gt = remove_first(&gt);
    }
    let lbp = last_two(&lt).0.map_or(S::neg_infinity(), |p| p.meet_x(&l));
    if let (Some(s), _) = first_two(&gt) {
        gt = set_first_lbp(&gt, l.meet_x(&s));
    }
    let node = Some(Rc::new(Node {
        line: l,
        lbp,
        prio: priority(&l),
        left: None,
        right: None,
    }));
    merge(&merge(&lt, &node), &gt)
}

/// Envelopes of `lines[i..]` for every `i`.
#[derive(Debug, Clone)]
pub struct PersistentEnvelopeSequence<S> {
    versions: Vec<Link<S>>,
}

impl<S: Scalar> PersistentEnvelopeSequence<S> {
    pub fn build(lines: &[Line<S>]) -> Self {
        let mut versions = vec![None; lines.len() + 1];
        for i in (0..lines.len()).rev() {
            versions[i] = insert(&versions[i + 1], lines[i]);
        }
        let seq = Self { versions };
        #[cfg(debug_assertions)]
        if lines.len() <= 64 {
            seq.check_against_rebuild(lines);
        }
        seq
    }

    /// Every version agrees with an envelope rebuilt from scratch, probed at
    /// the rebuilt breakpoints and between them.
    #[cfg(debug_assertions)]
    fn check_against_rebuild(&self, lines: &[Line<S>]) {
        for v in 0..lines.len() {
            let fresh =
                super::envelope::upper_envelope_lines(&lines[v..]).expect("non-empty suffix");
            let b = fresh.breaks();
            let mut probes: Vec<S> = b.to_vec();
            probes.extend(b.windows(2).map(|w| (w[0] + w[1]) / S::lit(2.0)));
            let (first, last) = (b.first().copied(), b.last().copied());
            let far = S::lit(1e3);
            probes.extend(first.map(|f| f - far).or(Some(S::zero())));
            probes.extend(last.map(|l| l + far));
            for x in probes {
                let mut c = Counters::default();
                let got = self
                    .locate(v, x, &mut c)
                    .expect("non-empty version")
                    .eval(x);
                let want = fresh.value_at(x);
                debug_assert!(
                    (got - want).abs() <= S::walk_slack() * (S::one() + want.abs()),
                    "version {v} differs from its rebuild at x = {x}: {got} vs {want}"
                );
            }
        }
    }

    /// Number of versions (`lines.len() + 1`; the last one is empty).
    pub fn version_count(&self) -> usize {
        self.versions.len()
    }

    /// The envelope line of version `v` at `x`.
    pub fn locate(&self, v: usize, x: S, c: &mut Counters) -> Option<Line<S>> {
        let mut best = None;
        let mut cur = self.versions[v].as_ref();
        while let Some(n) = cur {
            c.comparisons += 1;
            if n.lbp <= x {
                best = Some(n.line);
                cur = n.right.as_ref();
            } else {
                cur = n.left.as_ref();
            }
        }
        best
    }

    /// Envelope lines of version `v`, slope ascending.
    pub fn lines(&self, v: usize) -> Vec<Line<S>> {
        fn walk<S: Scalar>(t: &Link<S>, out: &mut Vec<Line<S>>) {
            if let Some(n) = t {
                walk(&n.left, out);
                out.push(n.line);
                walk(&n.right, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.versions[v], &mut out);
        out
    }

    /// Distinct nodes over all versions.
    pub fn node_count(&self) -> usize {
        use std::collections::HashSet;
        let mut seen = HashSet::new();
        let mut stack: Vec<&Rc<Node<S>>> = self.versions.iter().flatten().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(Rc::as_ptr(n)) {
                stack.extend(n.left.iter());
                stack.extend(n.right.iter());
            }
        }
        seen.len()
    }
}
