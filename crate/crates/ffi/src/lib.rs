//! C ABI over `simkit`.
//!
//! Every function returns a [`SimkitStatus`]; on failure a message is kept in
//! thread-local storage and can be copied out with [`simkit_last_error`].
//! Pair sets are opaque handles owned by the caller and released with
//! [`simkit_pairs_free`]. Strings returned through out-parameters are released
//! with [`simkit_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use simkit::data::{read_embedding_file, write_embedding_file};
use simkit::eval::{evaluate_dataset, spearman_rho};
use simkit::metrics::{batch_score, score_slices};
use simkit::report::{render_table, run_experiment, OutputFormat, RunConfig};
use simkit::stats::{bootstrap_mean_diff_ci, wilcoxon_one_sided, PairedDifferences, WilcoxonMethod};
use simkit::{DenseVector, EmbeddingPair, Error, Metric, MetricKind};

pub const SIMKIT_METRIC_DOT: u32 = 0;
pub const SIMKIT_METRIC_COSINE: u32 = 1;
pub const SIMKIT_METRIC_OVERLAP: u32 = 2;
pub const SIMKIT_METRIC_TANH: u32 = 3;

pub const SIMKIT_FORMAT_MARKDOWN: u32 = 0;
pub const SIMKIT_FORMAT_CSV: u32 = 1;
pub const SIMKIT_FORMAT_JSON: u32 = 2;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimkitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Dimension = 3,
    Numeric = 4,
    Length = 5,
    EmptyInput = 6,
    Degenerate = 7,
    BudgetExceeded = 8,
    Format = 9,
    Range = 10,
    Label = 11,
    Integrity = 12,
    Config = 13,
    Io = 14,
    Panic = 15,
}

impl From<&Error> for SimkitStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => SimkitStatus::Dimension,
            Error::InvalidVector(_) => SimkitStatus::InvalidArgument,
            Error::Numeric(_) => SimkitStatus::Numeric,
            Error::Length { .. } => SimkitStatus::Length,
            Error::EmptyInput(_) => SimkitStatus::EmptyInput,
            Error::DegenerateCorrelation | Error::DegenerateTest(_) => SimkitStatus::Degenerate,
            Error::BudgetExceeded { .. } => SimkitStatus::BudgetExceeded,
            Error::Format(_) => SimkitStatus::Format,
            Error::Range(_) => SimkitStatus::Range,
            Error::Label(_) => SimkitStatus::Label,
            Error::Integrity { .. } => SimkitStatus::Integrity,
            Error::Config(_) => SimkitStatus::Config,
            Error::Io(_) => SimkitStatus::Io,
        }
    }
}

/// Opaque set of embedding pairs.
pub struct SimkitPairs {
    pairs: Vec<EmbeddingPair>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

struct Failure(SimkitStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(SimkitStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SimkitStatus::NullPointer, format!("`{what}` is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(SimkitStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SimkitStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SimkitStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside simkit".into());
            SimkitStatus::Panic
        }
    }
}

fn metric_from(code: u32) -> Result<Metric, Failure> {
    match code {
        SIMKIT_METRIC_DOT => Ok(Metric::Dot),
        SIMKIT_METRIC_COSINE => Ok(Metric::Cosine),
        SIMKIT_METRIC_OVERLAP => Ok(Metric::OverlapSim),
        SIMKIT_METRIC_TANH => Ok(Metric::TanhSim),
        other => Err(invalid(format!("unknown metric code {other}"))),
    }
}

unsafe fn input_slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn out_ref<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or_else(|| null(what))
}

unsafe fn path_arg<'a>(ptr: *const c_char, what: &str) -> Result<&'a Path, Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    let s = CStr::from_ptr(ptr).to_str().map_err(|_| invalid(format!("`{what}` is not UTF-8")))?;
    Ok(Path::new(s))
}

unsafe fn pairs_ref<'a>(handle: *const SimkitPairs) -> Result<&'a SimkitPairs, Failure> {
    handle.as_ref().ok_or_else(|| null("pairs"))
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length plus one, or 0 if the
/// last call succeeded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn simkit_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len);
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n - 1) = 0;
            }
            bytes.len()
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn simkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Scores one pair of `dim`-element vectors.
///
/// # Safety
/// `x` and `y` must point to `dim` floats; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_score(
    metric: u32,
    x: *const f32,
    y: *const f32,
    dim: usize,
    epsilon: f64,
    out: *mut f64,
) -> SimkitStatus {
    guard(|| {
        let metric = metric_from(metric)?;
        let x = DenseVector::try_from(input_slice(x, dim, "x")?)?;
        let y = DenseVector::try_from(input_slice(y, dim, "y")?)?;
        let kind = MetricKind::new(metric, epsilon)?;
        *out_ref(out, "out")? = score_slices(kind.kind, x.as_slice(), y.as_slice(), kind.epsilon)?;
        Ok(())
    })
}

/// Loads an EMBP file into a new pair set.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_open(path: *const c_char, out: *mut *mut SimkitPairs) -> SimkitStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let pairs = read_embedding_file(path_arg(path, "path")?)?;
        *out = Box::into_raw(Box::new(SimkitPairs { pairs }));
        Ok(())
    })
}

/// Builds a pair set from row-major buffers: `xs` and `ys` hold
/// `n_pairs * dim` floats, `golds` holds `n_pairs` scores in [0, 1].
///
/// # Safety
/// Buffers must be valid for the stated lengths; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_new(
    dim: usize,
    n_pairs: usize,
    xs: *const f32,
    ys: *const f32,
    golds: *const f32,
    out: *mut *mut SimkitPairs,
) -> SimkitStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if dim == 0 {
            return Err(invalid("dim must be positive"));
        }
        let total = dim.checked_mul(n_pairs).ok_or_else(|| invalid("dim * n_pairs overflows"))?;
        let xs = input_slice(xs, total, "xs")?;
        let ys = input_slice(ys, total, "ys")?;
        let golds = input_slice(golds, n_pairs, "golds")?;
        let pairs = xs
            .chunks_exact(dim)
            .zip(ys.chunks_exact(dim))
            .zip(golds)
            .map(|((x, y), &g)| EmbeddingPair::new(DenseVector::try_from(x)?, DenseVector::try_from(y)?, f64::from(g)))
            .collect::<simkit::Result<Vec<_>>>()?;
        *out = Box::into_raw(Box::new(SimkitPairs { pairs }));
        Ok(())
    })
}

/// Releases a pair set. Null is ignored.
///
/// # Safety
/// `pairs` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_free(pairs: *mut SimkitPairs) {
    if !pairs.is_null() {
        drop(Box::from_raw(pairs));
    }
}

/// Number of pairs, or 0 for a null handle.
///
/// # Safety
/// `pairs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_len(pairs: *const SimkitPairs) -> usize {
    pairs.as_ref().map_or(0, |p| p.pairs.len())
}

/// Vector dimension, or 0 for a null or empty set.
///
/// # Safety
/// `pairs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_dim(pairs: *const SimkitPairs) -> usize {
    pairs.as_ref().and_then(|p| p.pairs.first()).map_or(0, |p| p.dim())
}

/// Writes one score per pair into `out`, which must hold `out_len >= len` doubles.
///
/// # Safety
/// `pairs` must be a live handle; `out` must point to `out_len` doubles.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_score(
    pairs: *const SimkitPairs,
    metric: u32,
    epsilon: f64,
    out: *mut f64,
    out_len: usize,
) -> SimkitStatus {
    guard(|| {
        let pairs = pairs_ref(pairs)?;
        let metric = MetricKind::new(metric_from(metric)?, epsilon)?;
        if out_len < pairs.pairs.len() {
            return Err(Failure(
                SimkitStatus::Length,
                format!("output holds {out_len} scores, need {}", pairs.pairs.len()),
            ));
        }
        let scores = batch_score(&pairs.pairs, metric)?;
        if scores.is_empty() {
            return Ok(());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        slice::from_raw_parts_mut(out, scores.len()).copy_from_slice(&scores);
        Ok(())
    })
}

/// MSE and Spearman correlation of one metric against the set's golds.
/// `out_rho_defined` is set to 0 when the correlation is undefined.
///
/// # Safety
/// `pairs` must be a live handle; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_evaluate(
    pairs: *const SimkitPairs,
    metric: u32,
    epsilon: f64,
    out_mse: *mut f64,
    out_rho: *mut f64,
    out_rho_defined: *mut u8,
) -> SimkitStatus {
    guard(|| {
        let pairs = pairs_ref(pairs)?;
        let kind = MetricKind::new(metric_from(metric)?, epsilon)?;
        let (mse, rho, defined) = (out_ref(out_mse, "out_mse")?, out_ref(out_rho, "out_rho")?, out_ref(out_rho_defined, "out_rho_defined")?);
        let res = evaluate_dataset(&pairs.pairs, &[kind])?;
        let r = &res[&kind.kind];
        *mse = r.mse;
        *rho = r.spearman_rho.unwrap_or(f64::NAN);
        *defined = u8::from(r.spearman_rho.is_some());
        Ok(())
    })
}

/// Writes the set as an EMBP file. If `sha256_out` is non-null it receives
/// the 64 hex digits plus a NUL (65 bytes).
///
/// # Safety
/// `path` must be a NUL-terminated string; `sha256_out` null or 65 writable bytes.
#[no_mangle]
pub unsafe extern "C" fn simkit_pairs_write(
    pairs: *const SimkitPairs,
    path: *const c_char,
    sha256_out: *mut c_char,
) -> SimkitStatus {
    guard(|| {
        let pairs = pairs_ref(pairs)?;
        let digest = write_embedding_file(&pairs.pairs, path_arg(path, "path")?)?;
        if !sha256_out.is_null() {
            let c = CString::new(digest).expect("hex digest has no NUL");
            ptr::copy_nonoverlapping(c.as_ptr(), sha256_out, 65);
        }
        Ok(())
    })
}

/// Tie-aware Spearman correlation of two length-`n` series.
///
/// # Safety
/// `a` and `b` must point to `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_spearman(a: *const f64, b: *const f64, n: usize, out: *mut f64) -> SimkitStatus {
    guard(|| {
        *out_ref(out, "out")? = spearman_rho(input_slice(a, n, "a")?, input_slice(b, n, "b")?)?;
        Ok(())
    })
}

/// One-sided Wilcoxon signed-rank test on paired differences
/// (baseline error minus candidate error). `out_exact` is 1 when the exact
/// null distribution was used.
///
/// # Safety
/// `d` must point to `n` doubles; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_wilcoxon(
    d: *const f64,
    n: usize,
    out_w_plus: *mut f64,
    out_p: *mut f64,
    out_n_effective: *mut usize,
    out_exact: *mut u8,
) -> SimkitStatus {
    guard(|| {
        let d = PairedDifferences::new(input_slice(d, n, "d")?.to_vec())?;
        let r = wilcoxon_one_sided(&d)?;
        *out_ref(out_w_plus, "out_w_plus")? = r.w_plus;
        *out_ref(out_p, "out_p")? = r.p_value;
        *out_ref(out_n_effective, "out_n_effective")? = r.n_effective;
        *out_ref(out_exact, "out_exact")? = u8::from(r.method == WilcoxonMethod::Exact);
        Ok(())
    })
}

/// Seeded percentile-bootstrap interval for the mean of `d`.
///
/// # Safety
/// `d` must point to `n` doubles; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_bootstrap_ci(
    d: *const f64,
    n: usize,
    n_resamples: usize,
    level: f64,
    seed: u64,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> SimkitStatus {
    guard(|| {
        let d = PairedDifferences::new(input_slice(d, n, "d")?.to_vec())?;
        let ci = bootstrap_mean_diff_ci(&d, n_resamples, level, seed)?;
        *out_ref(out_lower, "out_lower")? = ci.lower;
        *out_ref(out_upper, "out_upper")? = ci.upper;
        Ok(())
    })
}

/// Runs an evaluation config and renders it in `format`
/// (`SIMKIT_FORMAT_*`). The returned string must be released with
/// [`simkit_string_free`]. Per-dataset failures are part of the report, not
/// an error status.
///
/// # Safety
/// `config_path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn simkit_run_report(
    config_path: *const c_char,
    format: u32,
    out: *mut *mut c_char,
) -> SimkitStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let format = match format {
            SIMKIT_FORMAT_MARKDOWN => OutputFormat::Markdown,
            SIMKIT_FORMAT_CSV => OutputFormat::Csv,
            SIMKIT_FORMAT_JSON => OutputFormat::Json,
            other => return Err(invalid(format!("unknown format code {other}"))),
        };
        let config = RunConfig::load(path_arg(config_path, "config_path")?)?;
        let report = run_experiment(&config)?;
        let text = render_table(&report, format)?;
        *out = CString::new(text).map_err(|_| invalid("report contains NUL"))?.into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn simkit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
