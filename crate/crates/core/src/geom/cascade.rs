//! Fractional cascading over a forest of sorted catalogs.
//!
//! Every node keeps an augmented catalog: its own values merged with every
//! second element of each child's augmented catalog. After one binary search
//! at a node, the position in any child's augmented catalog follows from a
//! stored bridge plus at most one local step.

use crate::counters::Counters;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
struct Node<S> {
    aug: Vec<S>,
    /// `own_prefix[p]` = own catalog elements among `aug[..p]`.
    own_prefix: Vec<u32>,
    /// Per child: `(child, down)` with `down[p]` = child augmented elements
    /// strictly below `aug[p]` (`down[len]` = child length).
    children: Vec<(usize, Vec<u32>)>,
}

#[derive(Debug, Clone, Default)]
pub struct FractionalCascade<S> {
    nodes: Vec<Node<S>>,
}

/// Position inside a node's augmented catalog: the number of entries `< x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cursor {
    pub node: usize,
    pub pos: usize,
}

impl<S: Scalar> FractionalCascade<S> {
    /// `catalogs[i]` is node `i`'s own sorted catalog; `children[i]` lists its
    /// children, each with a larger index than `i`.
    pub fn build(catalogs: Vec<Vec<S>>, children: &[Vec<usize>]) -> Self {
        assert_eq!(catalogs.len(), children.len());
        let n = catalogs.len();
        let mut nodes: Vec<Option<Node<S>>> = (0..n).map(|_| None).collect();
        for (i, own) in catalogs.into_iter().enumerate().rev() {
            debug_assert!(own.windows(2).all(|w| w[0] <= w[1]));
            let mut merged: Vec<(S, bool)> = own.iter().map(|v| (*v, true)).collect();
            for &c in &children[i] {
                assert!(c > i, "cascade children must follow their parent");
                let child = nodes[c].as_ref().expect("child built");
                merged.extend(child.aug.iter().skip(1).step_by(2).map(|v| (*v, false)));
            }
            merged.sort_by(|a, b| crate::scalar::cmp(a.0, b.0).then(b.1.cmp(&a.1)));
            let aug: Vec<S> = merged.iter().map(|e| e.0).collect();
            let mut own_prefix = Vec::with_capacity(aug.len() + 1);
            own_prefix.push(0u32);
            let mut acc = 0u32;
            for e in &merged {
                acc += e.1 as u32;
                own_prefix.push(acc);
            }
            let kids = children[i]
                .iter()
                .map(|&c| {
                    let child = nodes[c].as_ref().unwrap();
                    let mut down = Vec::with_capacity(aug.len() + 1);
                    let mut q = 0usize;
                    for v in &aug {
                        while q < child.aug.len() && child.aug[q] < *v {
                            q += 1;
                        }
                        down.push(q as u32);
                    }
                    down.push(child.aug.len() as u32);
                    (c, down)
                })
                .collect();
            nodes[i] = Some(Node {
                aug,
                own_prefix,
                children: kids,
            });
        }
        Self {
            nodes: nodes.into_iter().map(|n| n.unwrap()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn augmented(&self, node: usize) -> &[S] {
        &self.nodes[node].aug
    }

    pub fn total_size(&self) -> usize {
        self.nodes.iter().map(|n| n.aug.len()).sum()
    }

    /// Binary search in `node`'s augmented catalog.
    pub fn locate(&self, node: usize, x: S, c: &mut Counters) -> Cursor {
        let aug = &self.nodes[node].aug;
        c.comparisons += (usize::BITS - aug.len().leading_zeros()) as u64 + 1;
        Cursor {
            node,
            pos: aug.partition_point(|v| *v < x),
        }
    }

    /// Number of own-catalog elements `< x` at the cursor.
    #[inline]
    pub fn own_rank(&self, cur: Cursor) -> usize {
        self.nodes[cur.node].own_prefix[cur.pos] as usize
    }

    /// Follows the bridge from `cur` into child slot `slot`.
    #[inline]
    pub fn descend(&self, cur: Cursor, slot: usize, x: S, c: &mut Counters) -> Cursor {
        let (child, down) = &self.nodes[cur.node].children[slot];
        let aug = &self.nodes[*child].aug;
        let mut q = down[cur.pos] as usize;
        c.bridge_steps += 1;
        while q > 0 && aug[q - 1] >= x {
            q -= 1;
            c.bridge_steps += 1;
        }
        Cursor {
            node: *child,
            pos: q,
        }
    }

    /// Follows the bridge to a specific child node.
    pub fn descend_to(&self, cur: Cursor, child: usize, x: S, c: &mut Counters) -> Cursor {
        let slot = self.nodes[cur.node]
            .children
            .iter()
            .position(|(k, _)| *k == child)
            .expect("not a child");
        self.descend(cur, slot, x, c)
    }

    pub fn child_count(&self, node: usize) -> usize {
        self.nodes[node].children.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn path_matches_binary_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let cats: Vec<Vec<f64>> = (0..12)
            .map(|_| {
                let len = rng.gen_range(0..60);
                let mut v: Vec<f64> = (0..len).map(|_| rng.gen_range(0..40) as f64).collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v
            })
            .collect();
        let children: Vec<Vec<usize>> = (0..12)
            .map(|i| if i + 1 < 12 { vec![i + 1] } else { vec![] })
            .collect();
        let fc = FractionalCascade::build(cats.clone(), &children);
        for _ in 0..500 {
            let x =
                rng.gen_range(-2.0..42.0f64).round() + if rng.gen_bool(0.5) { 0.5 } else { 0.0 };
            let mut c = Counters::default();
            let mut cur = fc.locate(0, x, &mut c);
            for (i, cat) in cats.iter().enumerate() {
                assert_eq!(
                    fc.own_rank(cur),
                    cat.partition_point(|v| *v < x),
                    "layer {i}"
                );
                if i + 1 < cats.len() {
                    cur = fc.descend(cur, 0, x, &mut c);
                }
            }
            assert!(c.bridge_steps <= 2 * cats.len() as u64);
        }
    }

    #[test]
    fn binary_tree_matches_binary_search() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 31;
        let cats: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let mut v: Vec<f64> = (0..rng.gen_range(0..30))
                    .map(|_| rng.gen_range(0.0..1.0))
                    .collect();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v
            })
            .collect();
        let children: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                [2 * i + 1, 2 * i + 2]
                    .into_iter()
                    .filter(|&c| c < n)
                    .collect()
            })
            .collect();
        let fc = FractionalCascade::build(cats.clone(), &children);
        assert!(fc.total_size() <= 2 * cats.iter().map(|c| c.len()).sum::<usize>() + n);
        for _ in 0..300 {
            let x: f64 = rng.gen_range(-0.1..1.1);
            let mut c = Counters::default();
            let mut cur = fc.locate(0, x, &mut c);
            loop {
                assert_eq!(fc.own_rank(cur), cats[cur.node].partition_point(|v| *v < x));
                if fc.child_count(cur.node) == 0 {
                    break;
                }
                let slot = rng.gen_range(0..fc.child_count(cur.node));
                cur = fc.descend(cur, slot, x, &mut c);
            }
        }
    }
}
