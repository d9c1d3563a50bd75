//! Experiment runner and per-model table rendering.
//!
//! A run loads each manifest, evaluates every configured metric, flags the
//! candidates (OS, HTS) that beat both baselines (Dot, Cosine) under the
//! one-sided Wilcoxon test, and attaches bootstrap intervals for each
//! candidate/baseline pairing. A failing dataset is recorded and the run
//! moves on.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{load_manifest, read_embedding_file, DatasetKind};
use crate::error::{Error, Result};
use crate::eval::evaluate_dataset;
use crate::metrics::{Metric, MetricKind, DEFAULT_EPSILON};
use crate::stats::{self, compare, significance_flags, WilcoxonMethod, DEFAULT_ALPHA, DEFAULT_LEVEL, DEFAULT_RESAMPLES};

pub const SEED_ENV: &str = "SIMKIT_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Markdown,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Format(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Manifest paths as written in the config; used verbatim in reports.
    pub manifests: Vec<String>,
    /// Directory relative manifest paths are resolved against.
    pub base_dir: PathBuf,
    pub metrics: Vec<Metric>,
    pub epsilon: f64,
    pub alpha: f64,
    pub bootstrap_resamples: usize,
    pub bootstrap_level: f64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            manifests: Vec::new(),
            base_dir: PathBuf::from("."),
            metrics: Metric::ALL.to_vec(),
            epsilon: DEFAULT_EPSILON,
            alpha: DEFAULT_ALPHA,
            bootstrap_resamples: DEFAULT_RESAMPLES,
            bootstrap_level: DEFAULT_LEVEL,
            seed: 0,
            output_format: OutputFormat::Markdown,
            out: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    manifests: Vec<String>,
    metrics: Option<Vec<String>>,
    epsilon: Option<f64>,
    alpha: Option<f64>,
    bootstrap_resamples: Option<usize>,
    bootstrap_level: Option<f64>,
    seed: Option<u64>,
    output_format: Option<String>,
    out: Option<PathBuf>,
}

impl RunConfig {
    /// Parses TOML config text. A missing `seed` falls back to `SIMKIT_SEED`,
    /// then to 0.
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let defaults = RunConfig::default();
        let metrics = match file.metrics {
            Some(names) => names.iter().map(|n| n.parse()).collect::<Result<Vec<Metric>>>()?,
            None => defaults.metrics,
        };
        let seed = match file.seed {
            Some(s) => s,
            None => seed_from_env()?.unwrap_or(defaults.seed),
        };
        let config = RunConfig {
            manifests: file.manifests,
            base_dir: base_dir.to_path_buf(),
            metrics: normalize_metrics(metrics),
            epsilon: file.epsilon.unwrap_or(defaults.epsilon),
            alpha: file.alpha.unwrap_or(defaults.alpha),
            bootstrap_resamples: file.bootstrap_resamples.unwrap_or(defaults.bootstrap_resamples),
            bootstrap_level: file.bootstrap_level.unwrap_or(defaults.bootstrap_level),
            seed,
            output_format: match file.output_format {
                Some(f) => f.parse()?,
                None => defaults.output_format,
            },
            out: file.out.map(|p| if p.is_relative() { base_dir.join(p) } else { p }),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::from_toml_str(&text, path.parent().unwrap_or_else(|| Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.bootstrap_resamples == 0 {
            return Err(Error::Config("bootstrap_resamples must be at least 1".into()));
        }
        if !(self.bootstrap_level > 0.0 && self.bootstrap_level < 1.0) {
            return Err(Error::Config(format!("bootstrap_level {} outside (0, 1)", self.bootstrap_level)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon {} must be finite and >= 0", self.epsilon)));
        }
        Ok(())
    }

    fn manifest_path(&self, entry: &str) -> PathBuf {
        let p = Path::new(entry);
        if p.is_relative() {
            self.base_dir.join(p)
        } else {
            p.to_path_buf()
        }
    }
}

pub fn seed_from_env() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_ENV}=`{v}` is not a u64"))),
        Err(_) => Ok(None),
    }
}

/// Sorted, deduplicated metric list.
pub fn normalize_metrics(mut metrics: Vec<Metric>) -> Vec<Metric> {
    metrics.sort();
    metrics.dedup();
    metrics
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSettings {
    pub metrics: Vec<Metric>,
    pub epsilon: f64,
    pub alpha: f64,
    pub bootstrap_resamples: usize,
    pub bootstrap_level: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricCell {
    pub metric: Metric,
    pub mse: f64,
    pub spearman_rho: Option<f64>,
    pub star: bool,
    pub best: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonCell {
    pub candidate: Metric,
    pub baseline: Metric,
    pub p_value: Option<f64>,
    pub w_plus: Option<f64>,
    pub n_effective: Option<usize>,
    pub method: Option<WilcoxonMethod>,
    pub ci_lower: f64,
    pub ci_upper: f64,
}

impl From<stats::Comparison> for ComparisonCell {
    fn from(c: stats::Comparison) -> Self {
        ComparisonCell {
            candidate: c.candidate,
            baseline: c.baseline,
            p_value: c.wilcoxon.map(|w| w.p_value),
            w_plus: c.wilcoxon.map(|w| w.w_plus),
            n_effective: c.wilcoxon.map(|w| w.n_effective),
            method: c.wilcoxon.map(|w| w.method),
            ci_lower: c.ci.lower,
            ci_upper: c.ci.upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    Io,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        let kind = if matches!(e, Error::Io(_)) { FailureKind::Io } else { FailureKind::Validation };
        Failure { kind, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetReport {
    pub manifest: String,
    pub dataset: Option<DatasetKind>,
    pub model_id: Option<String>,
    pub split: Option<String>,
    pub n_pairs: Option<u64>,
    pub metrics: Vec<MetricCell>,
    pub comparisons: Vec<ComparisonCell>,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub settings: RunSettings,
    pub datasets: Vec<DatasetReport>,
}

impl ExperimentReport {
    pub fn failures(&self) -> impl Iterator<Item = (&DatasetReport, &Failure)> {
        self.datasets.iter().filter_map(|d| d.failure.as_ref().map(|f| (d, f)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

fn run_dataset(config: &RunConfig, entry: &str, report: &mut DatasetReport) -> Result<()> {
    let manifest = load_manifest(config.manifest_path(entry))?;
    report.dataset = Some(manifest.dataset);
    report.model_id = Some(manifest.model_id.clone());
    report.split = Some(manifest.split.clone());
    report.n_pairs = Some(manifest.n_pairs);

    let pairs = read_embedding_file(&manifest.path)?;
    let kinds = config
        .metrics
        .iter()
        .map(|&m| MetricKind::new(m, config.epsilon))
        .collect::<Result<Vec<_>>>()?;
    let results = evaluate_dataset(&pairs, &kinds)?;

    let errors: BTreeMap<Metric, Vec<f64>> =
        results.iter().map(|(m, r)| (*m, r.squared_errors.clone())).collect();
    let candidates: Vec<Metric> = config.metrics.iter().copied().filter(|m| m.is_candidate()).collect();
    let baselines: Vec<Metric> = config.metrics.iter().copied().filter(|m| m.is_baseline()).collect();
    let flags = significance_flags(&errors, &candidates, &baselines, config.alpha)?;

    // Row minimum; strict comparison keeps the earliest metric on ties.
    let best = results
        .iter()
        .fold(None::<(Metric, f64)>, |acc, (m, r)| match acc {
            Some((_, v)) if v <= r.mse => acc,
            _ => Some((*m, r.mse)),
        })
        .map(|(m, _)| m);

    report.metrics = results
        .values()
        .map(|r| MetricCell {
            metric: r.metric.kind,
            mse: r.mse,
            spearman_rho: r.spearman_rho,
            star: flags.get(&r.metric.kind).copied().unwrap_or(false),
            best: Some(r.metric.kind) == best,
        })
        .collect();

    for &cand in &candidates {
        for &base in &baselines {
            let c = compare(
                cand,
                &errors[&cand],
                base,
                &errors[&base],
                config.bootstrap_resamples,
                config.bootstrap_level,
                config.seed,
            )?;
            report.comparisons.push(c.into());
        }
    }
    Ok(())
}

/// Runs every manifest in the config. Deterministic for a fixed config.
pub fn run_experiment(config: &RunConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let metrics = normalize_metrics(config.metrics.clone());
    let config = RunConfig { metrics: metrics.clone(), ..config.clone() };
    let datasets = config
        .manifests
        .par_iter()
        .map(|entry| {
            let mut report = DatasetReport {
                manifest: entry.clone(),
                dataset: None,
                model_id: None,
                split: None,
                n_pairs: None,
                metrics: Vec::new(),
                comparisons: Vec::new(),
                failure: None,
            };
            if let Err(e) = run_dataset(&config, entry, &mut report) {
                report.metrics.clear();
                report.comparisons.clear();
                report.failure = Some(Failure::from(&e));
            }
            report
        })
        .collect();
    Ok(ExperimentReport {
        settings: RunSettings {
            metrics,
            epsilon: config.epsilon,
            alpha: config.alpha,
            bootstrap_resamples: config.bootstrap_resamples,
            bootstrap_level: config.bootstrap_level,
            seed: config.seed,
        },
        datasets,
    })
}

fn fmt4(v: f64) -> String {
    format!("{v:.4}")
}

/// MSE cell text: four decimals with a `*` suffix for flagged candidates.
pub fn mse_cell_text(cell: &MetricCell) -> String {
    let mut s = fmt4(cell.mse);
    if cell.star {
        s.push('*');
    }
    s
}

fn rho_text(cell: &MetricCell) -> String {
    cell.spearman_rho.map(fmt4).unwrap_or_else(|| "n/a".into())
}

/// Successful datasets grouped by model, in first-appearance order.
fn by_model(report: &ExperimentReport) -> Vec<(&str, Vec<&DatasetReport>)> {
    let mut groups: Vec<(&str, Vec<&DatasetReport>)> = Vec::new();
    for d in report.datasets.iter().filter(|d| d.failure.is_none()) {
        let model = d.model_id.as_deref().unwrap_or("");
        match groups.iter_mut().find(|(m, _)| *m == model) {
            Some((_, rows)) => rows.push(d),
            None => groups.push((model, vec![d])),
        }
    }
    groups
}

fn dataset_label(d: &DatasetReport) -> String {
    d.dataset.map(|k| k.id().to_owned()).unwrap_or_else(|| d.manifest.clone())
}

fn render_markdown(report: &ExperimentReport) -> String {
    let metrics = &report.settings.metrics;
    let header = {
        let mut h = String::from("| Dataset |");
        let mut rule = String::from("|---|");
        for m in metrics {
            let _ = write!(h, " {} |", m.label());
            rule.push_str("---:|");
        }
        format!("{h}\n{rule}\n")
    };
    let mut out = String::new();
    for (model, rows) in by_model(report) {
        let _ = writeln!(out, "### MSE: {model}\n");
        out.push_str(&header);
        for d in &rows {
            let _ = write!(out, "| {} |", dataset_label(d));
            for cell in &d.metrics {
                let text = mse_cell_text(cell);
                if cell.best {
                    let _ = write!(out, " **{text}** |");
                } else {
                    let _ = write!(out, " {text} |");
                }
            }
            out.push('\n');
        }
        out.push_str("\nLower is better. Bold marks the lowest MSE per row; `*` marks a significant improvement over every baseline.\n\n");

        let _ = writeln!(out, "### Spearman: {model}\n");
        out.push_str(&header);
        for d in &rows {
            let _ = write!(out, "| {} |", dataset_label(d));
            for cell in &d.metrics {
                let _ = write!(out, " {} |", rho_text(cell));
            }
            out.push('\n');
        }
        out.push('\n');
    }
    let failures: Vec<_> = report.failures().collect();
    if !failures.is_empty() {
        out.push_str("### Failed datasets\n\n");
        for (d, f) in failures {
            let _ = writeln!(out, "- `{}`: {}", d.manifest, f.message);
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("table,model_id,dataset,metric,value,best,star\n");
    for (model, rows) in by_model(report) {
        for (table, mse) in [("mse", true), ("spearman", false)] {
            for d in &rows {
                for cell in &d.metrics {
                    let value = if mse { fmt4(cell.mse) } else { cell.spearman_rho.map(fmt4).unwrap_or_default() };
                    let _ = writeln!(
                        out,
                        "{table},{},{},{},{value},{},{}",
                        csv_field(model),
                        csv_field(&dataset_label(d)),
                        cell.metric.label(),
                        mse && cell.best,
                        mse && cell.star,
                    );
                }
            }
        }
    }
    out
}

/// Renders MSE and Spearman tables in the requested format.
pub fn render_table(report: &ExperimentReport, format: OutputFormat) -> Result<String> {
    if report.settings.metrics.is_empty() {
        return Err(Error::Format("report has no metrics to render".into()));
    }
    if report.datasets.is_empty() {
        return Err(Error::Format("report has no datasets".into()));
    }
    Ok(match format {
        OutputFormat::Markdown => render_markdown(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => report.to_json(),
    })
}
