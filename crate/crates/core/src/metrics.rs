//! Similarity kernels: dot product, cosine, overlap similarity (OS) and
//! hyperbolic tangent similarity (HTS).
//!
//! Vectors are stored in single precision (the EMBP storage type) but every
//! reduction accumulates in `f64` with one fixed left-to-right pass per pair,
//! so a score depends only on its two inputs and never on batch layout or
//! thread count.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::EmbeddingPair;
use crate::error::{Error, Result};

/// Default denominator guard for OS and HTS.
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Inputs whose L2 norm falls below this are treated as zero vectors and
/// score 0 under every metric.
pub const ZERO_NORM: f64 = 1e-12;

/// A non-empty vector of finite embedding coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector(Vec<f32>);

impl DenseVector {
    pub fn new(values: Vec<f32>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidVector("dimension must be at least 1".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("element {i} is {}", values[i])));
        }
        Ok(DenseVector(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f32> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|&v| f64::from(v) * f64::from(v)).sum::<f64>().sqrt()
    }
}

impl TryFrom<Vec<f32>> for DenseVector {
    type Error = Error;

    fn try_from(values: Vec<f32>) -> Result<Self> {
        DenseVector::new(values)
    }
}

impl TryFrom<&[f32]> for DenseVector {
    type Error = Error;

    fn try_from(values: &[f32]) -> Result<Self> {
        DenseVector::new(values.to_vec())
    }
}

/// The four similarity functions, in table column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Metric {
    Dot,
    Cosine,
    #[serde(rename = "OS")]
    OverlapSim,
    #[serde(rename = "HTS")]
    TanhSim,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Dot, Metric::Cosine, Metric::OverlapSim, Metric::TanhSim];

    /// Column header used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Metric::Dot => "Dot",
            Metric::Cosine => "Cosine",
            Metric::OverlapSim => "OS",
            Metric::TanhSim => "HTS",
        }
    }

    /// Short name accepted on the command line.
    pub fn short_name(self) -> &'static str {
        match self {
            Metric::Dot => "dot",
            Metric::Cosine => "cos",
            Metric::OverlapSim => "os",
            Metric::TanhSim => "hts",
        }
    }

    pub fn is_candidate(self) -> bool {
        matches!(self, Metric::OverlapSim | Metric::TanhSim)
    }

    pub fn is_baseline(self) -> bool {
        matches!(self, Metric::Dot | Metric::Cosine)
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Metric::Dot),
            "cos" | "cosine" => Ok(Metric::Cosine),
            "os" | "overlap" => Ok(Metric::OverlapSim),
            "hts" | "tanh" => Ok(Metric::TanhSim),
            _ => Err(Error::Label(format!("unknown metric `{s}` (expected dot, cos, os or hts)"))),
        }
    }
}

/// A metric together with its denominator guard. `epsilon` is ignored by Dot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricKind {
    pub kind: Metric,
    pub epsilon: f64,
}

impl MetricKind {
    pub fn new(kind: Metric, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::Range(format!("epsilon must be finite and >= 0, got {epsilon}")));
        }
        Ok(MetricKind { kind, epsilon })
    }

    pub fn with_default_epsilon(kind: Metric) -> Self {
        MetricKind { kind, epsilon: DEFAULT_EPSILON }
    }

    pub fn score(&self, x: &DenseVector, y: &DenseVector) -> Result<f64> {
        score_slices(self.kind, x.as_slice(), y.as_slice(), self.epsilon)
    }
}

struct Moments {
    dot: f64,
    xx: f64,
    yy: f64,
}

impl Moments {
    fn of(x: &[f32], y: &[f32]) -> Self {
        let mut m = Moments { dot: 0.0, xx: 0.0, yy: 0.0 };
        for (&a, &b) in x.iter().zip(y) {
            let (a, b) = (f64::from(a), f64::from(b));
            m.dot += a * b;
            m.xx += a * a;
            m.yy += b * b;
        }
        m
    }

    fn has_zero_vector(&self, threshold: f64) -> bool {
        self.xx.sqrt() < threshold || self.yy.sqrt() < threshold
    }
}

fn check_dims(x: &[f32], y: &[f32]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Dimension { expected: x.len(), found: y.len() });
    }
    Ok(())
}

fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Numeric(format!("{what} evaluated to {value}")))
    }
}

/// Scores two raw slices. Elements are assumed finite; lengths are checked.
pub fn score_slices(metric: Metric, x: &[f32], y: &[f32], eps: f64) -> Result<f64> {
    check_dims(x, y)?;
    let m = Moments::of(x, y);
    match metric {
        Metric::Dot => {
            if m.has_zero_vector(ZERO_NORM) {
                return Ok(0.0);
            }
            finite(m.dot, "dot product")
        }
        Metric::Cosine => {
            // The cosine formula has no epsilon term, so eps acts as a norm guard.
            if m.has_zero_vector(eps.max(ZERO_NORM)) {
                return Ok(0.0);
            }
            let c = m.dot / (m.xx.sqrt() * m.yy.sqrt());
            finite(c, "cosine").map(|c| c.clamp(-1.0, 1.0))
        }
        Metric::OverlapSim => {
            if m.has_zero_vector(ZERO_NORM) {
                return Ok(0.0);
            }
            let denom = m.xx + m.yy - m.dot.abs() + eps;
            finite(m.dot / denom, "overlap similarity")
        }
        Metric::TanhSim => {
            if m.has_zero_vector(ZERO_NORM) {
                return Ok(0.0);
            }
            let arg = 2.0 * m.dot / (m.xx + m.yy + eps);
            finite(arg, "tanh similarity argument").map(f64::tanh)
        }
    }
}

pub fn dot(x: &DenseVector, y: &DenseVector) -> Result<f64> {
    score_slices(Metric::Dot, x.as_slice(), y.as_slice(), 0.0)
}

pub fn cosine(x: &DenseVector, y: &DenseVector, eps: f64) -> Result<f64> {
    score_slices(Metric::Cosine, x.as_slice(), y.as_slice(), eps)
}

/// `x·y / (‖x‖² + ‖y‖² − |x·y| + eps)`, bounded in [−1, 1].
pub fn overlap_similarity(x: &DenseVector, y: &DenseVector, eps: f64) -> Result<f64> {
    score_slices(Metric::OverlapSim, x.as_slice(), y.as_slice(), eps)
}

/// `tanh(2·x·y / (‖x‖² + ‖y‖² + eps))`, bounded in [−tanh 1, tanh 1].
pub fn tanh_similarity(x: &DenseVector, y: &DenseVector, eps: f64) -> Result<f64> {
    score_slices(Metric::TanhSim, x.as_slice(), y.as_slice(), eps)
}

/// Scores every pair, preserving input order. Work is split across the rayon
/// pool; the result is identical to a serial loop.
pub fn batch_score(pairs: &[EmbeddingPair], metric: MetricKind) -> Result<Vec<f64>> {
    let Some(first) = pairs.first() else {
        return Ok(Vec::new());
    };
    let dim = first.dim();
    if let Some(bad) = pairs.iter().find(|p| p.dim() != dim) {
        return Err(Error::Dimension { expected: dim, found: bad.dim() });
    }
    pairs
        .par_iter()
        .map(|p| metric.score(&p.x, &p.y))
        .collect()
}
