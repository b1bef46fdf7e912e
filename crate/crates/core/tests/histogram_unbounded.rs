mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uqr_core::gen;
use uqr_core::{Engine, HistogramUnboundedIndex, Query, RangeIndex};

#[test]
fn matches_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(120);
    for trial in 0..60 {
        let n = [1, 5, 40, 200][trial % 4];
        let pieces = [1, 2, 4, 8][trial / 4 % 4];
        let grid = if trial % 3 == 0 { Some(1.0) } else { None };
        let points = gen::histogram_points::<f64>(&mut rng, n, pieces, grid);
        let index = HistogramUnboundedIndex::build(points.clone()).unwrap();
        for _ in 0..40 {
            let i = gen::unbounded_interval(&mut rng, &points);
            let k = rng.gen_range(1..=n);
            let tau = gen::threshold(&mut rng, &points, &i);
            for q in [Query::Top1(i), Query::TopK(i, k), Query::Threshold(i, tau)] {
                common::check_query(&index, &points, &q).unwrap();
            }
        }
    }
}

#[test]
fn accepts_uniform_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(121);
    let points = gen::uniform_points::<f64>(&mut rng, 150, Some(1.0));
    let index = HistogramUnboundedIndex::build(points.clone()).unwrap();
    for _ in 0..100 {
        let i = gen::unbounded_interval(&mut rng, &points);
        common::check_query(&index, &points, &Query::TopK(i, 10)).unwrap();
        common::check_query(&index, &points, &Query::Top1(i)).unwrap();
    }
}

#[test]
fn heap_and_block_engines_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(122);
    let points = gen::histogram_points::<f64>(&mut rng, 300, 4, None);
    let index = HistogramUnboundedIndex::build(points.clone()).unwrap();
    let mut c = uqr_core::Counters::default();
    for _ in 0..200 {
        let i = gen::unbounded_interval(&mut rng, &points);
        let k = rng.gen_range(1..=300);
        let heap = index.topk(&i, k, Engine::Heap, &mut c).unwrap();
        assert_eq!(heap, index.topk(&i, k, Engine::Block, &mut c).unwrap());
        assert_eq!(heap, index.topk(&i, k, Engine::Select, &mut c).unwrap());
    }
}

#[test]
fn f32_instances_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let points = gen::histogram_points::<f32>(&mut rng, 80, 3, Some(0.5));
    let index = HistogramUnboundedIndex::build(points.clone()).unwrap();
    for _ in 0..100 {
        let i = gen::unbounded_interval(&mut rng, &points);
        let k = rng.gen_range(1..=80);
        common::check_query(&index, &points, &Query::TopK(i, k)).unwrap();
        common::check_query(&index, &points, &Query::Threshold(i, 0.5)).unwrap();
    }
}
