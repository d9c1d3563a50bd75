//! Per-dataset quality numbers: mean squared error against gold scores and
//! Spearman's rank correlation.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::EmbeddingPair;
use crate::error::{Error, Result};
use crate::metrics::{batch_score, Metric, MetricKind};

/// A gold similarity in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GoldScore(f64);

impl GoldScore {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(GoldScore(value))
        } else {
            Err(Error::Range(format!("gold score {value} outside [0, 1]")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalResult {
    pub metric: MetricKind,
    pub mse: f64,
    /// `None` when either rank series is constant.
    pub spearman_rho: Option<f64>,
    pub squared_errors: Vec<f64>,
}

fn check_lengths(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Length { left: a.len(), right: b.len() });
    }
    Ok(())
}

/// `(pred_i − gold_i)²` for each pair. Predictions are not clipped.
pub fn squared_errors(preds: &[f64], gold: &[f64]) -> Result<Vec<f64>> {
    check_lengths(preds, gold)?;
    if preds.is_empty() {
        return Err(Error::EmptyInput("squared errors need at least one pair"));
    }
    Ok(preds.iter().zip(gold).map(|(p, g)| (p - g) * (p - g)).collect())
}

pub fn mse(preds: &[f64], gold: &[f64]) -> Result<f64> {
    let errs = squared_errors(preds, gold)?;
    Ok(mean(&errs))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// 1-based ranks, smallest first; tied values share the mean of their ranks.
pub fn average_ranks(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput("ranking needs at least one value"));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("cannot rank element {i} = {}", values[i])));
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));

    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len() && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        // positions start..=end hold ranks start+1..=end+1
        let rank = (start + end + 2) as f64 / 2.0;
        for &idx in &order[start..=end] {
            ranks[idx] = rank;
        }
        start = end + 1;
    }
    Ok(ranks)
}

/// Spearman's ρ as the Pearson correlation of average ranks (tie-correct).
pub fn spearman_rho(preds: &[f64], gold: &[f64]) -> Result<f64> {
    check_lengths(preds, gold)?;
    if preds.len() < 2 {
        return Err(Error::EmptyInput("spearman needs at least two pairs"));
    }
    let ra = average_ranks(preds)?;
    let rb = average_ranks(gold)?;
    pearson(&ra, &rb)
}

fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    let (ma, mb) = (mean(a), mean(b));
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return Err(Error::DegenerateCorrelation);
    }
    Ok((cov / (va * vb).sqrt()).clamp(-1.0, 1.0))
}

/// Scores `pairs` under every metric and assembles one [`EvalResult`] each.
pub fn evaluate_dataset(pairs: &[EmbeddingPair], metrics: &[MetricKind]) -> Result<BTreeMap<Metric, EvalResult>> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("dataset has no pairs"));
    }
    let gold: Vec<f64> = pairs.iter().map(|p| p.gold.value()).collect();
    metrics
        .par_iter()
        .map(|&metric| {
            let scores = batch_score(pairs, metric)?;
            let squared_errors = squared_errors(&scores, &gold)?;
            let spearman_rho = match spearman_rho(&scores, &gold) {
                Ok(rho) => Some(rho),
                Err(Error::DegenerateCorrelation) | Err(Error::EmptyInput(_)) => None,
                Err(e) => return Err(e),
            };
            Ok((
                metric.kind,
                EvalResult { metric, mse: mean(&squared_errors), spearman_rho, squared_errors },
            ))
        })
        .collect()
}
