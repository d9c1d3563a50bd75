//! The F1 fixture: eight hand-specified 384-dimensional pairs.
//!
//! Every vector tiles a 4-element integer profile, scaled by 1/16, 96 times,
//! so all coordinates are exact in f32 and every metric reduces to small
//! rational arithmetic. Golds sit below both the OS and HTS scores, so the
//! magnitude-aware metrics beat both baselines on every pair. The expected
//! table lives in `docs/fixture-f1.md`.

use crate::data::EmbeddingPair;
use crate::metrics::DenseVector;

pub const F1_DIM: usize = 384;
const REPEAT: usize = 96;

const PROFILES: [([i8; 4], [i8; 4]); 8] = [
    ([4, 1, 2, 3], [3, 2, 2, 4]),
    ([5, 0, 1, 1], [1, 4, 1, 0]),
    ([2, 2, 2, 2], [3, 3, 3, 3]),
    ([6, 1, 0, 2], [5, 2, 1, 1]),
    ([1, 3, 5, 2], [2, 2, 4, 4]),
    ([3, 3, 0, 1], [1, 1, 4, 3]),
    ([4, 4, 1, 0], [4, 3, 1, 2]),
    ([2, 5, 1, 1], [1, 5, 2, 0]),
];

const GOLDS: [f64; 8] = [0.5, 0.125, 0.625, 0.5625, 0.625, 0.25, 0.59375, 0.53125];

/// Expected MSE per metric (Dot, Cosine, OS, HTS) at epsilon 1e-8.
pub const F1_MSE: [f64; 4] = [90.872802734375, 0.11355005762401316, 0.07316782538101682, 0.025368796731812224];

fn tile(profile: [i8; 4]) -> DenseVector {
    let values = profile
        .iter()
        .map(|&v| f32::from(v) / 16.0)
        .cycle()
        .take(4 * REPEAT)
        .collect();
    DenseVector::new(values).expect("fixture vectors are finite and non-empty")
}

pub fn f1_pairs() -> Vec<EmbeddingPair> {
    PROFILES
        .iter()
        .zip(GOLDS)
        .map(|(&(p, q), gold)| EmbeddingPair::new(tile(p), tile(q), gold).expect("valid fixture pair"))
        .collect()
}
