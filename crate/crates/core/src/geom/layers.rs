use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::envelope::{build_order, split_envelope, EnvelopeChain, Line};

/// Envelope layers: layer `i` is the upper envelope of the lines not in
/// layers `0..i`.
#[derive(Debug, Clone)]
pub struct LayerDecomposition<S> {
    pub layers: Vec<EnvelopeChain<S>>,
    /// `membership[j]` is the layer holding input line `j`.
    pub membership: Vec<usize>,
}

impl<S: Scalar> LayerDecomposition<S> {
    pub fn total_lines(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }
}

/// Repeated envelope peeling. Lines are sorted once; each peel is linear in
/// the lines that remain. Identical lines end up in successive layers.
pub fn peel_layers<S: Scalar>(lines: &[Line<S>]) -> Result<LayerDecomposition<S>> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut remaining = build_order(lines);
    let mut layers = Vec::new();
    let mut membership = vec![usize::MAX; lines.len()];
    while !remaining.is_empty() {
        let (chain, kept, rest) = split_envelope(lines, &remaining);
        for i in kept {
            membership[i] = layers.len();
        }
        layers.push(chain);
        remaining = rest;
    }
    let out = LayerDecomposition { layers, membership };
    debug_assert!(
        out.membership.iter().all(|&m| m < out.layers.len()) && out.total_lines() == lines.len(),
        "layers do not partition the input lines"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn l(a: f64, b: f64, id: u64) -> Line<f64> {
        Line::new(a, b, id)
    }

    /// Brute-force layer check: a line belongs to the envelope of a set iff it
    /// is strictly above every other line of the set on some open interval
    /// between two of its own crossings.
    fn on_envelope(set: &[Line<f64>], cand: &Line<f64>) -> bool {
        let mut xs = vec![-1e6, 1e6];
        for o in set {
            if o.slope != cand.slope {
                xs.push(cand.meet_x(o));
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut probes = vec![xs[0] - 1.0, xs[xs.len() - 1] + 1.0];
        probes.extend(xs.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        probes.iter().any(|&x| {
            set.iter().all(|o| {
                std::ptr::eq(o, cand)
                    || o.eval(x) < cand.eval(x)
                    || (o.eval(x) == cand.eval(x) && o.slope == cand.slope && o.owner > cand.owner)
            })
        })
    }

    #[test]
    fn four_line_example() {
        let lines = [
            l(0.0, 0.0, 1),
            l(0.0, 1.0, 2),
            l(1.0, 0.0, 3),
            l(-1.0, 0.0, 4),
        ];
        let d = peel_layers(&lines).unwrap();
        assert_eq!(d.layers.len(), 2);
        let first: Vec<_> = d.layers[0].lines().iter().map(|l| l.owner).collect();
        assert_eq!(first, vec![4, 2, 3]);
        assert_eq!(d.membership, vec![1, 0, 0, 0]);
    }

    #[test]
    fn parallel_lines_nest() {
        let lines: Vec<_> = (0..4).map(|i| l(0.0, i as f64, i)).collect();
        let d = peel_layers(&lines).unwrap();
        assert_eq!(d.layers.len(), 4);
        let order: Vec<_> = d.layers.iter().map(|c| c.lines()[0].owner).collect();
        assert_eq!(order, vec![3, 2, 1, 0]);
    }

    #[test]
    fn random_layers_match_definition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for trial in 0..4 {
            let n = if trial == 0 { 200 } else { 40 };
            let lines: Vec<_> = (0..n)
                .map(|i| l(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), i))
                .collect();
            let d = peel_layers(&lines).unwrap();
            assert_eq!(d.total_lines(), n as usize);
            let mut remaining: Vec<Line<f64>> = lines.clone();
            for (li, layer) in d.layers.iter().enumerate() {
                let expected: Vec<u64> = remaining
                    .iter()
                    .filter(|c| on_envelope(&remaining, c))
                    .map(|c| c.owner)
                    .collect();
                let mut got: Vec<u64> = layer.lines().iter().map(|l| l.owner).collect();
                got.sort();
                let mut expected = expected;
                expected.sort();
                assert_eq!(got, expected, "layer {li}");
                remaining.retain(|c| !got.contains(&c.owner));
            }
            assert!(remaining.is_empty());
        }
    }
}
