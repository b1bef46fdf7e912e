//! Upper envelope of piecewise-linear functions defined on the whole line.
//!
//! A function is a list of `(start, line)` pieces with strictly increasing
//! starts, the first one `-inf`; piece `i` covers `[start_i, start_{i+1})`.
//! Envelopes are merged pairwise, so building from `n` functions of `c`
//! pieces takes `O(nc log n)` up to the envelope's own complexity.

use crate::counters::Counters;
use crate::scalar::Scalar;

use super::envelope::Line;

#[derive(Debug, Clone)]
pub struct SegmentEnvelope<S> {
    starts: Vec<S>,
    lines: Vec<Line<S>>,
}

fn wins<S: Scalar>(a: &Line<S>, b: &Line<S>, x: S) -> bool {
    let (va, vb) = (a.eval(x), b.eval(x));
    va > vb || (va == vb && (a.owner, a.tag) < (b.owner, b.tag))
}

/// A point strictly inside `(x0, x1)`.
fn probe<S: Scalar>(x0: S, x1: S) -> S {
    match (x0.is_finite(), x1.is_finite()) {
        (true, true) => x0 + (x1 - x0) / S::lit(2.0),
        (true, false) => x0 + S::one(),
        (false, true) => x1 - S::one(),
        (false, false) => S::zero(),
    }
}

fn push<S: Scalar>(out: &mut Vec<(S, Line<S>)>, x: S, l: Line<S>) {
    match out.last() {
        Some((_, last)) if last.owner == l.owner && last.tag == l.tag => {}
        _ => out.push((x, l)),
    }
}

fn merge<S: Scalar>(a: &[(S, Line<S>)], b: &[(S, Line<S>)]) -> Vec<(S, Line<S>)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut x0 = S::neg_infinity();
    loop {
        let (la, lb) = (a[i].1, b[j].1);
        let na = a.get(i + 1).map_or(S::infinity(), |p| p.0);
        let nb = b.get(j + 1).map_or(S::infinity(), |p| p.0);
        let x1 = na.min(nb);
        let meet = if la.slope != lb.slope {
            la.meet_x(&lb)
        } else {
            S::nan()
        };
        if meet > x0 && meet < x1 {
            // the smaller slope is above to the left of the crossing
            let (left, right) = if la.slope < lb.slope {
                (la, lb)
            } else {
                (lb, la)
            };
            push(&mut out, x0, left);
            push(&mut out, meet, right);
        } else {
            let p = probe(x0, x1);
            push(&mut out, x0, if wins(&la, &lb, p) { la } else { lb });
        }
        if x1 == S::infinity() {
            break;
        }
        if na == x1 {
            i += 1;
        }
        if nb == x1 {
            j += 1;
        }
        x0 = x1;
    }
    out
}

impl<S: Scalar> SegmentEnvelope<S> {
    /// `functions` non-empty; each function non-empty, starting at `-inf`.
    pub fn build(functions: Vec<Vec<(S, Line<S>)>>) -> Self {
        assert!(!functions.is_empty());
        let mut level = functions;
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            let mut it = level.chunks(2);
            for pair in &mut it {
                next.push(if pair.len() == 2 {
                    merge(&pair[0], &pair[1])
                } else {
                    pair[0].clone()
                });
            }
            level = next;
        }
        let env = level.pop().unwrap();
        Self {
            starts: env.iter().map(|p| p.0).collect(),
            lines: env.iter().map(|p| p.1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (S, &Line<S>)> + '_ {
        self.starts.iter().copied().zip(self.lines.iter())
    }

    /// The envelope piece whose extent contains `x`.
    pub fn locate(&self, x: S, c: &mut Counters) -> &Line<S> {
        c.comparisons += (usize::BITS - self.starts.len().leading_zeros()) as u64 + 1;
        &self.lines[self.starts.partition_point(|s| *s <= x) - 1]
    }
}
