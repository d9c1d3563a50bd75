mod common;

use proptest::prelude::*;
use simkit::eval::{average_ranks, evaluate_dataset, spearman_rho};
use simkit::metrics::{batch_score, score_slices};
use simkit::{DenseVector, EmbeddingPair, Metric, MetricKind};

const BOUNDED: [Metric; 3] = [Metric::Cosine, Metric::OverlapSim, Metric::TanhSim];

fn vector_pair() -> impl Strategy<Value = (Vec<f32>, Vec<f32>)> {
    (1usize..48, -3.0f64..3.0).prop_flat_map(|(dim, log_scale)| {
        let scale = 10f64.powf(log_scale) as f32;
        let coord = (-1.0f32..1.0).prop_map(move |v| v * scale);
        (prop::collection::vec(coord.clone(), dim), prop::collection::vec(coord, dim))
    })
}

proptest! {
    #[test]
    fn symmetric_bit_for_bit((x, y) in vector_pair()) {
        for m in Metric::ALL {
            let a = score_slices(m, &x, &y, 1e-8).unwrap();
            let b = score_slices(m, &y, &x, 1e-8).unwrap();
            prop_assert_eq!(a.to_bits(), b.to_bits(), "{}", m);
        }
    }

    #[test]
    fn bounded((x, y) in vector_pair()) {
        for m in BOUNDED {
            let s = score_slices(m, &x, &y, 1e-8).unwrap();
            let bound = if m == Metric::TanhSim { 1f64.tanh() + 1e-12 } else { 1.0 };
            prop_assert!(s.abs() <= bound, "{} = {}", m, s);
        }
    }

    #[test]
    fn joint_power_of_two_scaling_is_exact((x, y) in vector_pair(), k in -6i32..6) {
        let a = 2f32.powi(k);
        let xs: Vec<f32> = x.iter().map(|v| v * a).collect();
        let ys: Vec<f32> = y.iter().map(|v| v * a).collect();
        for m in BOUNDED {
            let s = score_slices(m, &x, &y, 0.0).unwrap();
            let t = score_slices(m, &xs, &ys, 0.0).unwrap();
            prop_assert!((s - t).abs() <= 1e-15, "{}: {} vs {}", m, s, t);
        }
    }

    #[test]
    fn monotone_in_angle_at_fixed_norms(r1 in 0.01f64..100.0, r2 in 0.01f64..100.0, t1 in 0.0f64..3.0, gap in 1e-3f64..1.0) {
        let t2 = (t1 + gap).min(std::f64::consts::PI);
        let x = [r1 as f32, 0.0];
        let near = [(r2 * t1.cos()) as f32, (r2 * t1.sin()) as f32];
        let far = [(r2 * t2.cos()) as f32, (r2 * t2.sin()) as f32];
        for m in [Metric::OverlapSim, Metric::TanhSim] {
            let s_near = score_slices(m, &x, &near, 1e-8).unwrap();
            let s_far = score_slices(m, &x, &far, 1e-8).unwrap();
            prop_assert!(s_near >= s_far, "{}: {} < {}", m, s_near, s_far);
        }
    }

    #[test]
    fn spearman_matches_brute_force(
        pairs in prop::collection::vec((0u8..6, 0u8..6), 3..40)
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
        let b: Vec<f64> = pairs.iter().map(|p| f64::from(p.1)).collect();
        let want = common::brute_spearman(&a, &b);
        match spearman_rho(&a, &b) {
            Ok(rho) => prop_assert!((rho - want).abs() <= 1e-12, "{} vs {}", rho, want),
            Err(_) => prop_assert!(!want.is_finite()),
        }
    }

    #[test]
    fn spearman_invariant_under_monotone_maps(
        pairs in prop::collection::vec((-50i32..50, 0u8..10), 3..40)
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| f64::from(p.0) / 7.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| f64::from(p.1)).collect();
        let mapped: Vec<f64> = a.iter().map(|v| v * v * v + 2.0 * v).collect();
        prop_assert_eq!(average_ranks(&a).unwrap(), average_ranks(&mapped).unwrap());
        match (spearman_rho(&a, &b), spearman_rho(&mapped, &b)) {
            (Ok(r), Ok(s)) => prop_assert_eq!(r.to_bits(), s.to_bits()),
            (Err(_), Err(_)) => {}
            (r, s) => prop_assert!(false, "{:?} vs {:?}", r, s),
        }
    }

    #[test]
    fn unit_norm_pairs_rank_equivalent(
        signs in prop::collection::vec((prop::collection::vec(any::<bool>(), 64), prop::collection::vec(any::<bool>(), 64), 0.0f64..1.0), 3..60)
    ) {
        // ±1/8 over 64 coordinates: every vector has norm exactly 1
        let v = |s: &Vec<bool>| DenseVector::new(s.iter().map(|&b| if b { 0.125 } else { -0.125 }).collect()).unwrap();
        let pairs: Vec<EmbeddingPair> = signs.iter().map(|(a, b, g)| EmbeddingPair::new(v(a), v(b), *g).unwrap()).collect();
        let metrics: Vec<_> = Metric::ALL.into_iter().map(MetricKind::with_default_epsilon).collect();
        let res = evaluate_dataset(&pairs, &metrics).unwrap();
        let rhos: Vec<Option<u64>> = res.values().map(|r| r.spearman_rho.map(f64::to_bits)).collect();
        prop_assert!(rhos.windows(2).all(|w| w[0] == w[1]), "{:?}", rhos);
    }
}

#[test]
fn batch_matches_serial_bit_for_bit() {
    use rand::Rng;
    let mut rng = common::rng(3);
    let pairs: Vec<EmbeddingPair> = (0..2000)
        .map(|_| {
            let x: Vec<f32> = (0..96).map(|_| rng.random_range(-2.0..2.0)).collect();
            let y: Vec<f32> = (0..96).map(|_| rng.random_range(-2.0..2.0)).collect();
            EmbeddingPair::new(DenseVector::new(x).unwrap(), DenseVector::new(y).unwrap(), rng.random()).unwrap()
        })
        .collect();
    for m in Metric::ALL {
        let kind = MetricKind::with_default_epsilon(m);
        let batch = batch_score(&pairs, kind).unwrap();
        let serial: Vec<f64> = pairs.iter().map(|p| kind.score(&p.x, &p.y).unwrap()).collect();
        assert!(batch.iter().zip(&serial).all(|(a, b)| a.to_bits() == b.to_bits()), "{m}");
    }
}

#[test]
fn zero_vectors_score_zero() {
    let z = [0.0f32; 5];
    let x = [1.0f32, -2.0, 3.0, 0.5, 0.0];
    for m in Metric::ALL {
        assert_eq!(score_slices(m, &z, &x, 1e-8).unwrap(), 0.0, "{m}");
        assert_eq!(score_slices(m, &x, &z, 0.0).unwrap(), 0.0, "{m}");
    }
}
