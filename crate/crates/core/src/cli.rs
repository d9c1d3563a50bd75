//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation error (including bad usage), 2 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::data::read_embedding_file;
use crate::error::{Error, Result};
use crate::metrics::{batch_score, Metric, MetricKind, DEFAULT_EPSILON};
use crate::report::{render_table, run_experiment, FailureKind, OutputFormat, RunConfig};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "simkit", version, about = "Similarity metrics and evaluation harness for embedding pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one score per pair of an EMBP file.
    Score {
        #[arg(long, value_parser = parse_metric)]
        metric: Metric,
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a full evaluation from a config file and render the report.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_format)]
        format: Option<OutputFormat>,
        /// Falls back to the config, then to SIMKIT_SEED.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        resamples: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in invariant suite.
    Selftest,
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_format(s: &str) -> std::result::Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn emit(text: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn score(metric: Metric, file: &PathBuf, epsilon: f64, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<()> {
    let pairs = read_embedding_file(file)?;
    let scores = batch_score(&pairs, MetricKind::new(metric, epsilon)?)?;
    let mut text = String::with_capacity(scores.len() * 20);
    for s in scores {
        text.push_str(&format!("{s}\n"));
    }
    emit(&text, out, stdout)
}

#[allow(clippy::too_many_arguments)]
fn eval(
    config: &PathBuf,
    format: Option<OutputFormat>,
    seed: Option<u64>,
    epsilon: Option<f64>,
    alpha: Option<f64>,
    resamples: Option<usize>,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(e) = epsilon {
        cfg.epsilon = e;
    }
    if let Some(a) = alpha {
        cfg.alpha = a;
    }
    if let Some(r) = resamples {
        cfg.bootstrap_resamples = r;
    }
    if let Some(f) = format {
        cfg.output_format = f;
    }
    if out.is_some() {
        cfg.out = out;
    }
    cfg.validate()?;

    let report = run_experiment(&cfg)?;
    let text = render_table(&report, cfg.output_format)?;
    emit(&text, cfg.out.as_ref(), stdout)?;

    let mut code = 0;
    for (d, f) in report.failures() {
        let _ = writeln!(stderr, "simkit: dataset `{}` failed: {}", d.manifest, f.message);
        code = code.max(match f.kind {
            FailureKind::Io => 2,
            FailureKind::Validation => 1,
        });
    }
    Ok(code)
}

fn run_selftest(stdout: &mut dyn Write) -> Result<i32> {
    let checks = selftest::run();
    let mut failed = 0;
    for c in &checks {
        if c.passed {
            writeln!(stdout, "PASS  {}", c.name)?;
        } else {
            failed += 1;
            writeln!(stdout, "FAIL  {}: {}", c.name, c.detail)?;
        }
    }
    writeln!(stdout, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    Ok(if failed == 0 { 0 } else { 1 })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn cli_main<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    0
                }
                _ => 1,
            };
        }
    };
    let result = match cli.command {
        Command::Score { metric, file, epsilon, out } => score(metric, &file, epsilon, out.as_ref(), stdout).map(|_| 0),
        Command::Eval { config, format, seed, epsilon, alpha, resamples, out } => {
            eval(&config, format, seed, epsilon, alpha, resamples, out, stdout, stderr)
        }
        Command::Selftest => run_selftest(stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "simkit: {e}");
            e.exit_code()
        }
    }
}
