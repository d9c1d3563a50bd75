//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn f1_expected() -> Value {
    let text = std::fs::read_to_string(fixtures_dir().join("f1_expected.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Ranks by counting: rank of v = #{u < v} + (#{u == v} + 1) / 2.
pub fn brute_ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|a| {
            let less = v.iter().filter(|b| *b < a).count() as f64;
            let equal = v.iter().filter(|b| *b == a).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Two-pass Pearson correlation.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

pub fn brute_spearman(a: &[f64], b: &[f64]) -> f64 {
    pearson(&brute_ranks(a), &brute_ranks(b))
}

/// P(W+ >= w) by walking every one of the 2^n sign patterns over ranks 1..=n.
pub fn enumerate_wilcoxon_p(w_plus: f64, n: usize) -> f64 {
    let mut hits = 0u64;
    for mask in 0u64..(1 << n) {
        let w: u64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i as u64 + 1).sum();
        if w as f64 >= w_plus {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

/// Nonzero differences with distinct magnitudes and random signs.
pub fn tie_free_sample(rng: &mut StdRng, n: usize) -> Vec<f64> {
    let mut mags: Vec<f64> = Vec::with_capacity(n);
    while mags.len() < n {
        let m: f64 = rng.random_range(1e-3..1.0);
        if !mags.contains(&m) {
            mags.push(m);
        }
    }
    // bias the signs a little so p-values spread over (0, 1)
    let p_pos: f64 = rng.random_range(0.2..0.8);
    mags.into_iter().map(|m| if rng.random_bool(p_pos) { m } else { -m }).collect()
}
