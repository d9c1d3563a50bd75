//! Parameter-free similarity metrics for dense embeddings and the harness
//! used to evaluate them against gold similarity scores.
//!
//! Besides the usual dot product and cosine similarity, two magnitude-aware
//! metrics are provided:
//!
//! * overlap similarity, `x·y / (‖x‖² + ‖y‖² − |x·y| + ε)`;
//! * hyperbolic tangent similarity, `tanh(2·x·y / (‖x‖² + ‖y‖² + ε))`.
//!
//! The evaluation side computes MSE and tie-aware Spearman correlation per
//! metric, one-sided Wilcoxon signed-rank tests on paired squared errors, and
//! seeded percentile-bootstrap intervals, then renders per-model tables.

pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod metrics;
pub mod report;
pub mod selftest;
pub mod stats;

pub use data::{DatasetKind, DatasetManifest, EmbeddingPair};
pub use error::{Error, Result};
pub use eval::{EvalResult, GoldScore};
pub use metrics::{DenseVector, Metric, MetricKind};
pub use report::{ExperimentReport, OutputFormat, RunConfig};
