//! Significance testing on paired squared errors.

mod bootstrap;
mod wilcoxon;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::Metric;

pub(crate) use bootstrap::SplitMix64;
pub use bootstrap::{bootstrap_mean_diff_ci, resample_indices, BootstrapCI, DEFAULT_LEVEL, DEFAULT_RESAMPLES};
pub use wilcoxon::{exact_wilcoxon_p, wilcoxon_normal_approx, wilcoxon_one_sided, WilcoxonMethod, WilcoxonResult, EXACT_MAX_N};

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Per-pair `baseline_err − candidate_err`; positive entries favour the candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedDifferences(Vec<f64>);

impl PairedDifferences {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("difference {i} is {}", values[i])));
        }
        Ok(PairedDifferences(values))
    }

    pub fn between(baseline_errors: &[f64], candidate_errors: &[f64]) -> Result<Self> {
        if baseline_errors.len() != candidate_errors.len() {
            return Err(Error::Length { left: baseline_errors.len(), right: candidate_errors.len() });
        }
        Self::new(baseline_errors.iter().zip(candidate_errors).map(|(b, c)| b - c).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Wilcoxon test, or `None` when the test is undefined (all differences zero).
pub fn wilcoxon_or_degenerate(d: &PairedDifferences) -> Result<Option<WilcoxonResult>> {
    match wilcoxon_one_sided(d) {
        Ok(r) => Ok(Some(r)),
        Err(Error::DegenerateTest(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Flags each candidate whose one-sided Wilcoxon p-value is below `alpha`
/// against every baseline. A candidate with no baselines to beat, or with a
/// degenerate test against any of them, is not flagged.
pub fn significance_flags(
    errors_by_metric: &BTreeMap<Metric, Vec<f64>>,
    candidates: &[Metric],
    baselines: &[Metric],
    alpha: f64,
) -> Result<BTreeMap<Metric, bool>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Range(format!("alpha {alpha} outside (0, 1)")));
    }
    let present_baselines: Vec<&Vec<f64>> =
        baselines.iter().filter_map(|b| errors_by_metric.get(b)).collect();
    let mut flags = BTreeMap::new();
    for cand in candidates {
        let Some(cand_errs) = errors_by_metric.get(cand) else { continue };
        let mut flagged = !present_baselines.is_empty();
        for base_errs in &present_baselines {
            let d = PairedDifferences::between(base_errs, cand_errs)?;
            match wilcoxon_or_degenerate(&d)? {
                Some(r) if r.p_value < alpha => {}
                _ => flagged = false,
            }
        }
        flags.insert(*cand, flagged);
    }
    Ok(flags)
}

/// Wilcoxon test plus bootstrap interval for one candidate/baseline pairing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub candidate: Metric,
    pub baseline: Metric,
    pub wilcoxon: Option<WilcoxonResult>,
    pub ci: BootstrapCI,
}

pub fn compare(
    candidate: Metric,
    candidate_errors: &[f64],
    baseline: Metric,
    baseline_errors: &[f64],
    n_resamples: usize,
    level: f64,
    seed: u64,
) -> Result<Comparison> {
    let d = PairedDifferences::between(baseline_errors, candidate_errors)?;
    Ok(Comparison {
        candidate,
        baseline,
        wilcoxon: wilcoxon_or_degenerate(&d)?,
        ci: bootstrap_mean_diff_ci(&d, n_resamples, level, seed)?,
    })
}
