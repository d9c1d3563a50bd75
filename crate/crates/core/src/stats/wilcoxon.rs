use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::PairedDifferences;
use crate::error::{Error, Result};
use crate::eval::average_ranks;

/// Largest sample size evaluated by exact enumeration.
pub const EXACT_MAX_N: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WilcoxonMethod {
    Exact,
    NormalApprox,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub w_plus: f64,
    pub n_effective: usize,
    pub p_value: f64,
    pub method: WilcoxonMethod,
}

struct SignedRanks {
    n: usize,
    w_plus: f64,
    tie_term: f64,
}

fn signed_ranks(d: &PairedDifferences) -> Result<SignedRanks> {
    let nonzero: Vec<f64> = d.as_slice().iter().copied().filter(|&v| v != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::DegenerateTest("every paired difference is zero"));
    }
    let magnitudes: Vec<f64> = nonzero.iter().map(|v| v.abs()).collect();
    let ranks = average_ranks(&magnitudes)?;
    let w_plus: f64 = nonzero
        .iter()
        .zip(&ranks)
        .filter(|(v, _)| **v > 0.0)
        .map(|(_, r)| r)
        .sum();
    Ok(SignedRanks { n: nonzero.len(), w_plus, tie_term: tie_correction(&magnitudes) })
}

/// One-sided signed-rank test of "candidate errors are smaller", i.e. the
/// differences are shifted above zero. Zero differences are dropped.
///
/// Small tie-free samples use the exact null distribution; everything else
/// uses [`wilcoxon_normal_approx`].
pub fn wilcoxon_one_sided(d: &PairedDifferences) -> Result<WilcoxonResult> {
    let SignedRanks { n, w_plus, tie_term } = signed_ranks(d)?;
    if n <= EXACT_MAX_N && tie_term == 0.0 {
        let p_value = exact_wilcoxon_p(w_plus, n)?;
        return Ok(WilcoxonResult { w_plus, n_effective: n, p_value, method: WilcoxonMethod::Exact });
    }
    let p_value = normal_upper_tail(w_plus, n, tie_term)?;
    Ok(WilcoxonResult { w_plus, n_effective: n, p_value, method: WilcoxonMethod::NormalApprox })
}

/// Same test forced onto the tie-corrected normal approximation with
/// continuity correction.
pub fn wilcoxon_normal_approx(d: &PairedDifferences) -> Result<WilcoxonResult> {
    let SignedRanks { n, w_plus, tie_term } = signed_ranks(d)?;
    let p_value = normal_upper_tail(w_plus, n, tie_term)?;
    Ok(WilcoxonResult { w_plus, n_effective: n, p_value, method: WilcoxonMethod::NormalApprox })
}

/// Σ (t³ − t) over groups of tied magnitudes.
fn tie_correction(magnitudes: &[f64]) -> f64 {
    let mut sorted = magnitudes.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut total = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        total += t * t * t - t;
        i = j;
    }
    total
}

fn normal_upper_tail(w_plus: f64, n: usize, tie_term: f64) -> Result<f64> {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
    if var <= 0.0 {
        return Err(Error::DegenerateTest("signed-rank variance is zero"));
    }
    let z = (w_plus - mean - 0.5) / var.sqrt();
    Ok((0.5 * erfc(z / std::f64::consts::SQRT_2)).clamp(0.0, 1.0))
}

/// Exact `P(W+ ≥ w_plus)` under the null for `n` untied ranks `1..=n`.
///
/// Each of the `2^n` sign assignments is equally likely; the count of
/// assignments reaching each rank sum is built up one rank at a time, so the
/// tail is an exact integer count divided by `2^n`.
pub fn exact_wilcoxon_p(w_plus: f64, n: usize) -> Result<f64> {
    if n > EXACT_MAX_N {
        return Err(Error::BudgetExceeded { n, max: EXACT_MAX_N });
    }
    let max_sum = n * (n + 1) / 2;
    if w_plus <= 0.0 {
        return Ok(1.0);
    }
    if w_plus > max_sum as f64 {
        return Ok(0.0);
    }
    let mut counts = vec![0u64; max_sum + 1];
    counts[0] = 1;
    for rank in 1..=n {
        let reach = rank * (rank + 1) / 2;
        for s in (rank..=reach).rev() {
            counts[s] += counts[s - rank];
        }
    }
    let threshold = w_plus.ceil() as usize;
    let hits: u64 = counts[threshold..].iter().sum();
    Ok(hits as f64 / (1u64 << n) as f64)
}
