//! Percentile bootstrap for the mean of paired differences.
//!
//! Index streams are a fixed function of `(seed, resample)`:
//!
//! * `key = mix(seed ^ mix(r))`, with `mix` the SplitMix64 output finalizer;
//! * a SplitMix64 generator starts at state `key`;
//! * draw `j` of `n` maps `u = next()` to index `(u as u128 * n as u128) >> 64`.
//!
//! Each resample mean is `d[0] + Σ (d[i_j] − d[0]) / n`, summed in draw order,
//! and the interval endpoints are linear-interpolation quantiles of the
//! sorted means. None of this depends on thread scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::PairedDifferences;
use crate::error::{Error, Result};

pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_LEVEL: f64 = 0.95;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) struct SplitMix64(pub(crate) u64);

impl SplitMix64 {
    pub(crate) fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(GOLDEN_GAMMA);
        mix(self.0)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub(crate) fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// The `n` resampled indices of resample `r` under `seed`.
pub fn resample_indices(seed: u64, r: u64, n: usize) -> impl Iterator<Item = usize> {
    let mut rng = SplitMix64(mix(seed ^ mix(r)));
    (0..n).map(move |_| ((u128::from(rng.next_u64()) * n as u128) >> 64) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCI {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub n_resamples: usize,
    pub seed: u64,
}

impl BootstrapCI {
    /// A strictly positive interval: the candidate's error is lower with high confidence.
    pub fn strictly_positive(&self) -> bool {
        self.lower > 0.0
    }
}

fn resample_mean(d: &[f64], seed: u64, r: u64) -> f64 {
    let reference = d[0];
    let acc: f64 = resample_indices(seed, r, d.len()).map(|i| d[i] - reference).sum();
    reference + acc / d.len() as f64
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn bootstrap_mean_diff_ci(
    d: &PairedDifferences,
    n_resamples: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapCI> {
    let d = d.as_slice();
    if d.is_empty() {
        return Err(Error::EmptyInput("bootstrap needs at least one difference"));
    }
    if n_resamples == 0 {
        return Err(Error::Config("bootstrap needs at least one resample".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Range(format!("confidence level {level} outside (0, 1)")));
    }
    let mut means: Vec<f64> = (0..n_resamples as u64)
        .into_par_iter()
        .map(|r| resample_mean(d, seed, r))
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok(BootstrapCI {
        lower: quantile(&means, tail),
        upper: quantile(&means, 1.0 - tail),
        level,
        n_resamples,
        seed,
    })
}
