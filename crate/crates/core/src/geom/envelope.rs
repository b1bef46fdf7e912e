use std::cmp::Ordering;

use crate::counters::Counters;
use crate::error::{Error, Result};
use crate::model::PointId;
use crate::scalar::{cmp, Scalar};

/// Non-vertical line `y = slope * x + intercept`. `tag` distinguishes several
/// lines contributed by the same point (cdf pieces).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line<S> {
    pub slope: S,
    pub intercept: S,
    pub owner: PointId,
    pub tag: u32,
}

impl<S: Scalar> Line<S> {
    pub fn new(slope: S, intercept: S, owner: PointId) -> Self {
        Self {
            slope,
            intercept,
            owner,
            tag: 0,
        }
    }

    #[inline]
    pub fn eval(&self, x: S) -> S {
        self.slope * x + self.intercept
    }

    /// x-coordinate where `self` and `other` meet; slopes must differ.
    #[inline]
    pub fn meet_x(&self, other: &Self) -> S {
        (self.intercept - other.intercept) / (other.slope - self.slope)
    }

    /// Envelope construction order: slope ascending, then the higher line
    /// first among parallels, then owner.
    pub(crate) fn build_order(&self, other: &Self) -> Ordering {
        cmp(self.slope, other.slope)
            .then(cmp(other.intercept, self.intercept))
            .then(self.owner.cmp(&other.owner))
            .then(self.tag.cmp(&other.tag))
    }
}

/// Upper envelope of a line set, left to right. Consecutive lines meet at
/// `breaks[i]` (between `lines[i]` and `lines[i + 1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeChain<S> {
    lines: Vec<Line<S>>,
    breaks: Vec<S>,
}

impl<S: Scalar> EnvelopeChain<S> {
    pub fn lines(&self) -> &[Line<S>] {
        &self.lines
    }

    pub fn breaks(&self) -> &[S] {
        &self.breaks
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Index of the line on the envelope at `x`, by binary search.
    pub fn locate(&self, x: S, c: &mut Counters) -> usize {
        let rank = self.breaks.partition_point(|b| *b < x);
        c.comparisons += (usize::BITS - self.breaks.len().leading_zeros()) as u64 + 1;
        self.settle(rank, x, c)
    }

    /// Starting from the line at position `rank` (number of breaks left of
    /// `x`), step to a neighbor while it is strictly higher at `x`. Absorbs
    /// rounding in the computed breakpoints.
    #[inline]
    pub fn settle(&self, rank: usize, x: S, c: &mut Counters) -> usize {
        let mut i = rank.min(self.lines.len() - 1);
        loop {
            c.comparisons += 1;
            if i + 1 < self.lines.len() && self.lines[i + 1].eval(x) > self.lines[i].eval(x) {
                i += 1;
            } else if i > 0 && self.lines[i - 1].eval(x) > self.lines[i].eval(x) {
                i -= 1;
            } else {
                return i;
            }
        }
    }

    pub fn value_at(&self, x: S) -> S {
        let mut c = Counters::default();
        self.lines[self.locate(x, &mut c)].eval(x)
    }
}

/// Splits `order` (indices into `lines`, already in build order) into the
/// envelope chain and the remaining indices, preserving order in both.
pub(crate) fn split_envelope<S: Scalar>(
    lines: &[Line<S>],
    order: &[usize],
) -> (EnvelopeChain<S>, Vec<usize>, Vec<usize>) {
    let mut stack: Vec<usize> = Vec::new();
    let mut starts: Vec<S> = Vec::new();
    let mut dropped = vec![false; order.len()];
    let mut pos_of: Vec<usize> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let l = &lines[i];
        let mut start = S::neg_infinity();
        let mut skip = false;
        while let Some(&top) = stack.last() {
            let t = &lines[top];
            if t.slope == l.slope {
                // parallel and not higher: never on the envelope
                skip = true;
                break;
            }
            let x = t.meet_x(l);
            if stack.len() >= 2 && x <= *starts.last().unwrap() {
                stack.pop();
                starts.pop();
                dropped[pos_of.pop().unwrap()] = true;
            } else {
                start = x;
                break;
            }
        }
        if skip {
            dropped[pos] = true;
            continue;
        }
        stack.push(i);
        starts.push(start);
        pos_of.push(pos);
    }
    let kept: Vec<usize> = stack.clone();
    let rest: Vec<usize> = order
        .iter()
        .zip(&dropped)
        .filter(|(_, d)| **d)
        .map(|(i, _)| *i)
        .collect();
    let chain = EnvelopeChain {
        lines: stack.iter().map(|&i| lines[i]).collect(),
        breaks: starts.into_iter().skip(1).collect(),
    };
    (chain, kept, rest)
}

pub(crate) fn build_order<S: Scalar>(lines: &[Line<S>]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| lines[a].build_order(&lines[b]));
    order
}

/// Upper envelope of a set of full lines in O(n log n).
pub fn upper_envelope_lines<S: Scalar>(lines: &[Line<S>]) -> Result<EnvelopeChain<S>> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let order = build_order(lines);
    Ok(split_envelope(lines, &order).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn l(a: f64, b: f64, id: u64) -> Line<f64> {
        Line::new(a, b, id)
    }

    #[test]
    fn symmetric_example() {
        let env = upper_envelope_lines(&[l(1.0, 0.0, 1), l(-1.0, 0.0, 2), l(0.0, 0.0, 3)]).unwrap();
        let owners: Vec<_> = env.lines().iter().map(|l| l.owner).collect();
        assert_eq!(owners, vec![2, 1]);
        assert_eq!(env.breaks(), &[0.0]);
    }

    #[test]
    fn constant_and_diagonal() {
        let env = upper_envelope_lines(&[l(0.0, 1.0, 1), l(1.0, 0.0, 2)]).unwrap();
        assert_eq!(
            env.lines().iter().map(|l| l.owner).collect::<Vec<_>>(),
            vec![1, 2]
        );
        assert_eq!(env.breaks(), &[1.0]);
    }

    #[test]
    fn duplicates_keep_lowest_owner() {
        let env = upper_envelope_lines(&[l(1.0, 0.0, 5), l(1.0, 0.0, 3), l(1.0, -1.0, 1)]).unwrap();
        assert_eq!(env.len(), 1);
        assert_eq!(env.lines()[0].owner, 3);
    }

    #[test]
    fn empty_input() {
        assert_eq!(
            upper_envelope_lines::<f64>(&[]).unwrap_err(),
            Error::EmptyInput
        );
    }

    #[test]
    fn random_lines_match_max_scan() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let lines: Vec<_> = (0..100)
                .map(|i| l(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0), i))
                .collect();
            let env = upper_envelope_lines(&lines).unwrap();
            assert!(env.breaks().windows(2).all(|w| w[0] < w[1]));
            assert!(env.lines().windows(2).all(|w| w[0].slope < w[1].slope));
            for g in 0..1000 {
                let x = -10.0 + 20.0 * g as f64 / 999.0;
                let best = lines
                    .iter()
                    .map(|l| l.eval(x))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert_eq!(env.value_at(x), best);
            }
        }
    }
}
