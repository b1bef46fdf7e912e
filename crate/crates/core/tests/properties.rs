mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uqr_core::geom::{peel_layers, Line};
use uqr_core::halfplane::{select_top, SliceStream};
use uqr_core::model::interval_probability;
use uqr_core::{
    gen, Counters, HistogramBoundedIndex, HistogramUnboundedIndex, Query, QueryInterval,
    UniformBoundedIndex, UniformUnboundedIndex,
};

fn lines() -> impl Strategy<Value = Vec<Line<f64>>> {
    prop::collection::vec((-8i32..8, -8i32..8), 1..60).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, b))| Line::new(a as f64 / 2.0, b as f64, i as u64))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layers_partition_and_dominate(ls in lines(), x in -10.0..10.0f64) {
        let d = peel_layers(&ls).unwrap();
        prop_assert_eq!(d.total_lines(), ls.len());
        let mut owners: Vec<u64> = d.layers.iter().flat_map(|l| l.lines().iter().map(|l| l.owner)).collect();
        owners.sort_unstable();
        prop_assert_eq!(owners, (0..ls.len() as u64).collect::<Vec<_>>());
        // every layer's envelope is at least every line of the deeper layers
        for (i, layer) in d.layers.iter().enumerate() {
            let top = layer.value_at(x);
            for deeper in &d.layers[i + 1..] {
                for l in deeper.lines() {
                    prop_assert!(l.eval(x) <= top + 1e-9);
                }
            }
        }
    }

    #[test]
    fn select_top_takes_the_largest_prefixes(
        arrays in prop::collection::vec(prop::collection::vec(0u8..20, 0..12), 1..10),
        k_frac in 0.0..1.0f64,
    ) {
        let sorted: Vec<Vec<f64>> = arrays
            .iter()
            .map(|a| {
                let mut v: Vec<f64> = a.iter().map(|&x| x as f64).collect();
                v.sort_by(|a, b| b.total_cmp(a));
                v
            })
            .collect();
        let total: usize = sorted.iter().map(Vec::len).sum();
        let k = (k_frac * total as f64) as usize;
        let mut streams: Vec<SliceStream<'_, f64>> = sorted.iter().map(|v| SliceStream(v)).collect();
        let counts = select_top(&mut streams, k, &mut Counters::default()).unwrap();
        prop_assert_eq!(counts.iter().sum::<usize>(), k);
        let mut all: Vec<f64> = sorted.iter().flatten().copied().collect();
        all.sort_by(|a, b| b.total_cmp(a));
        let mut chosen: Vec<f64> = sorted.iter().zip(&counts).flat_map(|(v, &n)| v[..n].iter().copied()).collect();
        chosen.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(chosen, all[..k].to_vec());
    }

    #[test]
    fn probability_is_additive_and_monotone(
        seed in any::<u64>(),
        pieces in 1usize..6,
        xs in prop::array::uniform3(-10.0..110.0f64),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = &gen::histogram_points::<f64>(&mut rng, 1, pieces, None)[0];
        let mut xs = xs;
        xs.sort_by(f64::total_cmp);
        let pr = |a, b| interval_probability(p, &QueryInterval::new(a, b).unwrap());
        let (whole, left, right) = (pr(xs[0], xs[2]), pr(xs[0], xs[1]), pr(xs[1], xs[2]));
        prop_assert!((whole - left - right).abs() <= 1e-9);
        prop_assert!(left <= whole + 1e-12 && right <= whole + 1e-12);
        prop_assert!((0.0..=1.0).contains(&whole));
    }

    #[test]
    fn uniform_indexes_match_oracle(seed in any::<u64>(), n in 1usize..40, coarse in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = coarse.then_some(5.0);
        let pts = gen::uniform_points::<f64>(&mut rng, n, grid);
        let uu = UniformUnboundedIndex::build(pts.clone()).unwrap();
        let ub = UniformBoundedIndex::build(pts.clone()).unwrap();
        for _ in 0..10 {
            let i = gen::unbounded_interval(&mut rng, &pts);
            let b = gen::bounded_interval(&mut rng, &pts);
            let k = 1 + (seed as usize % n);
            let tau = gen::threshold(&mut rng, &pts, &b);
            for q in [Query::Top1(i), Query::TopK(i, k), Query::Threshold(i, tau)] {
                common::check_query(&uu, &pts, &q).map_err(TestCaseError::fail)?;
            }
            for q in [Query::Top1(b), Query::TopK(b, k), Query::Threshold(b, tau)] {
                common::check_query(&ub, &pts, &q).map_err(TestCaseError::fail)?;
            }
        }
    }

    #[test]
    fn histogram_indexes_match_oracle(seed in any::<u64>(), n in 1usize..25, pieces in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = gen::histogram_points::<f64>(&mut rng, n, pieces, Some(2.0));
        let hu = HistogramUnboundedIndex::build(pts.clone()).unwrap();
        let hb = HistogramBoundedIndex::build(pts.clone()).unwrap();
        for _ in 0..10 {
            let i = gen::unbounded_interval(&mut rng, &pts);
            let b = gen::bounded_interval(&mut rng, &pts);
            let k = 1 + (seed as usize % n);
            let tau = gen::threshold(&mut rng, &pts, &b);
            for q in [Query::Top1(i), Query::TopK(i, k), Query::Threshold(i, tau)] {
                common::check_query(&hu, &pts, &q).map_err(TestCaseError::fail)?;
            }
            for q in [Query::Top1(b), Query::TopK(b, k), Query::Threshold(b, tau)] {
                common::check_query(&hb, &pts, &q).map_err(TestCaseError::fail)?;
            }
            // the canonical family holds one plane per point
            let family = hb.canonical_sets(&b, &mut Counters::default()).unwrap();
            prop_assert_eq!(family.iter().map(|s| s.len()).sum::<usize>(), n);
        }
    }
}
