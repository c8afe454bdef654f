// SPDX-License-Identifier: MIT OR Apache-2.0

//! C ABI over the `linthresh` estimator.
//!
//! Samples and loss profiles are opaque handles created by `lt_*_new` and
//! released with the matching `lt_*_free`. Every fallible function returns an
//! [`LtStatus`]; on failure, [`lt_last_error_message`] describes the most
//! recent error on the calling thread. Results are written through
//! caller-provided out-pointers and are untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use linthresh::io::{read_csv, DatasetSpec};
use linthresh::{
    c_sweep, estimate, estimate_threshold, loss_profile, refit_beyond, Error, LinearFit, LossProfile, PenaltyConfig,
    PenaltyFn, Refit, Sample, ThresholdEstimate,
};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidSample = 3,
    DegenerateDesign = 4,
    InsufficientSuffix = 5,
    NoCandidates = 6,
    Io = 7,
    Parse = 8,
    OutOfRange = 9,
    Panic = 99,
}

impl From<&Error> for LtStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidSample(_) | Error::TooFewRows { .. } => LtStatus::InvalidSample,
            Error::InvalidConfig(_) | Error::Domain { .. } | Error::Config { .. } => LtStatus::InvalidArgument,
            Error::DegenerateDesign { .. } => LtStatus::DegenerateDesign,
            Error::InsufficientSuffix { .. } => LtStatus::InsufficientSuffix,
            Error::NoCandidates { .. } => LtStatus::NoCandidates,
            Error::Io { .. } => LtStatus::Io,
            Error::MissingColumn { .. } | Error::Parse { .. } | Error::Csv { .. } => LtStatus::Parse,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LtPenaltyKind {
    /// f(u) = max(u - shift, 0)
    PositivePart = 0,
    /// f(u) = max(arctan(u - shift), 0)
    Arctan = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct LtPenaltyConfig {
    pub c: f64,
    pub xi: f64,
    pub eta1: f64,
    pub kind: LtPenaltyKind,
    /// When false the smallest observed covariate is used as the shift.
    pub has_shift: bool,
    pub shift: f64,
    /// 0 selects the default max(3, ceil(eta1 * n)).
    pub min_suffix: usize,
}

impl From<&LtPenaltyConfig> for PenaltyConfig {
    fn from(c: &LtPenaltyConfig) -> Self {
        PenaltyConfig {
            c: c.c,
            xi: c.xi,
            penalty_fn: match c.kind {
                LtPenaltyKind::PositivePart => PenaltyFn::PositivePart,
                LtPenaltyKind::Arctan => PenaltyFn::Arctan,
            },
            shift: c.has_shift.then_some(c.shift),
            eta1: c.eta1,
            min_suffix: (c.min_suffix > 0).then_some(c.min_suffix),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LtFit {
    pub alpha: f64,
    pub beta: f64,
    pub n_used: usize,
    pub rss: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub ss_x: f64,
}

impl From<&LinearFit> for LtFit {
    fn from(f: &LinearFit) -> Self {
        LtFit {
            alpha: f.alpha,
            beta: f.beta,
            n_used: f.n_used,
            rss: f.rss,
            mean_x: f.mean_x,
            mean_y: f.mean_y,
            ss_x: f.ss_x,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LtRefit {
    pub psi: f64,
    pub cutoff: f64,
    pub fit: LtFit,
    pub sigma2_hat: f64,
    /// Row-major 2x2 covariance of (alpha, beta).
    pub covariance: [f64; 4],
    pub se_alpha: f64,
    pub se_beta: f64,
    pub z_alpha: f64,
    pub z_beta: f64,
    pub p_alpha: f64,
    pub p_beta: f64,
}

impl From<&Refit> for LtRefit {
    fn from(r: &Refit) -> Self {
        LtRefit {
            psi: r.psi,
            cutoff: r.cutoff,
            fit: (&r.fit).into(),
            sigma2_hat: r.sigma2_hat,
            covariance: [
                r.covariance[0][0],
                r.covariance[0][1],
                r.covariance[1][0],
                r.covariance[1][1],
            ],
            se_alpha: r.se_alpha,
            se_beta: r.se_beta,
            z_alpha: r.z_alpha,
            z_beta: r.z_beta,
            p_alpha: r.p_alpha,
            p_beta: r.p_beta,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LtEstimate {
    pub u_hat: f64,
    pub candidate_index: usize,
    pub loss: f64,
    pub penalized: f64,
    pub lambda_n: f64,
    pub gamma_n: f64,
    pub n: usize,
    pub fit: LtFit,
    pub has_refit: bool,
    /// Zeroed unless `has_refit`.
    pub refit: LtRefit,
}

impl From<&ThresholdEstimate> for LtEstimate {
    fn from(e: &ThresholdEstimate) -> Self {
        LtEstimate {
            u_hat: e.u_hat,
            candidate_index: e.candidate_index,
            loss: e.loss,
            penalized: e.penalized,
            lambda_n: e.lambda_n,
            gamma_n: e.gamma_n,
            n: e.n,
            fit: (&e.fit_at_u_hat).into(),
            has_refit: e.refit.is_some(),
            refit: e.refit.as_ref().map(LtRefit::from).unwrap_or_default(),
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LtProfileEntry {
    pub u: f64,
    pub n_suffix: usize,
    pub alpha: f64,
    pub beta: f64,
    pub loss: f64,
    pub penalty: f64,
    pub penalized: f64,
}

/// Opaque validated sample.
pub struct LtSample(Sample);

/// Opaque loss profile.
pub struct LtProfile(LossProfile);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("nul bytes removed"));
}

fn fail(status: LtStatus, msg: impl Into<String>) -> LtStatus {
    set_last_error(msg);
    status
}

fn from_error(e: Error) -> LtStatus {
    fail(LtStatus::from(&e), format!("[{}] {e}", e.code()))
}

/// Runs `f`, mapping panics to [`LtStatus::Panic`] and clearing the error
/// message on success.
fn guard(f: impl FnOnce() -> LtStatus) -> LtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(LtStatus::Ok) => {
            set_last_error("");
            LtStatus::Ok
        }
        Ok(status) => status,
        Err(_) => fail(LtStatus::Panic, "internal panic"),
    }
}

/// # Safety
/// `p` must be null or a valid, NUL-terminated string.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, LtStatus> {
    if p.is_null() {
        return Err(fail(LtStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(LtStatus::InvalidArgument, format!("{name} is not valid UTF-8")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `lt_*` call on the same thread.
#[no_mangle]
pub extern "C" fn lt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code, e.g. "LT_STATUS_NO_CANDIDATES".
#[no_mangle]
pub extern "C" fn lt_status_name(status: LtStatus) -> *const c_char {
    let s: &'static str = match status {
        LtStatus::Ok => "LT_STATUS_OK\0",
        LtStatus::NullPointer => "LT_STATUS_NULL_POINTER\0",
        LtStatus::InvalidArgument => "LT_STATUS_INVALID_ARGUMENT\0",
        LtStatus::InvalidSample => "LT_STATUS_INVALID_SAMPLE\0",
        LtStatus::DegenerateDesign => "LT_STATUS_DEGENERATE_DESIGN\0",
        LtStatus::InsufficientSuffix => "LT_STATUS_INSUFFICIENT_SUFFIX\0",
        LtStatus::NoCandidates => "LT_STATUS_NO_CANDIDATES\0",
        LtStatus::Io => "LT_STATUS_IO\0",
        LtStatus::Parse => "LT_STATUS_PARSE\0",
        LtStatus::OutOfRange => "LT_STATUS_OUT_OF_RANGE\0",
        LtStatus::Panic => "LT_STATUS_PANIC\0",
    };
    s.as_ptr().cast()
}

/// Defaults: c = 0, xi = 0.4, eta1 = 0.05, positive-part penalty shifted to
/// the smallest covariate.
#[no_mangle]
pub extern "C" fn lt_penalty_config_default() -> LtPenaltyConfig {
    LtPenaltyConfig {
        c: 0.0,
        xi: 0.4,
        eta1: 0.05,
        kind: LtPenaltyKind::PositivePart,
        has_shift: false,
        shift: 0.0,
        min_suffix: 0,
    }
}

/// Copies `len` paired observations into a new sample.
///
/// # Safety
/// `x` and `y` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lt_sample_new(x: *const f64, y: *const f64, len: usize, out: *mut *mut LtSample) -> LtStatus {
    guard(|| {
        if x.is_null() || y.is_null() || out.is_null() {
            return fail(LtStatus::NullPointer, "x, y and out must be non-null");
        }
        let xs = std::slice::from_raw_parts(x, len).to_vec();
        let ys = std::slice::from_raw_parts(y, len).to_vec();
        match Sample::new(xs, ys) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(LtSample(s)));
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reads two columns of a CSV file; `NA` and empty fields mark missing rows,
/// which are dropped.
///
/// # Safety
/// String arguments must be valid NUL-terminated UTF-8; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lt_sample_read_csv(
    path: *const c_char,
    x_column: *const c_char,
    y_column: *const c_char,
    out: *mut *mut LtSample,
) -> LtStatus {
    guard(|| {
        if out.is_null() {
            return fail(LtStatus::NullPointer, "out is null");
        }
        let args = (|| {
            Ok((
                str_arg(path, "path")?,
                str_arg(x_column, "x_column")?,
                str_arg(y_column, "y_column")?,
            ))
        })();
        let (path, x, y) = match args {
            Ok(a) => a,
            Err(status) => return status,
        };
        match read_csv(&DatasetSpec::new(path, x, y)) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(LtSample(d.sample)));
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of observations, or 0 for a null handle.
///
/// # Safety
/// `sample` must be null or a live handle from `lt_sample_new`.
#[no_mangle]
pub unsafe extern "C" fn lt_sample_len(sample: *const LtSample) -> usize {
    sample.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `sample` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lt_sample_free(sample: *mut LtSample) {
    if !sample.is_null() {
        drop(Box::from_raw(sample));
    }
}

/// # Safety
/// Pointers must be null or valid for the documented access.
unsafe fn sample_and_config<'a>(
    sample: *const LtSample,
    config: *const LtPenaltyConfig,
) -> Result<(&'a Sample, PenaltyConfig), LtStatus> {
    match (sample.as_ref(), config.as_ref()) {
        (Some(s), Some(c)) => Ok((&s.0, c.into())),
        _ => Err(fail(LtStatus::NullPointer, "sample and config must be non-null")),
    }
}

/// Builds the loss profile of `sample` under `config`.
///
/// # Safety
/// `sample` must be a live handle, `config` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_new(
    sample: *const LtSample,
    config: *const LtPenaltyConfig,
    out: *mut *mut LtProfile,
) -> LtStatus {
    guard(|| {
        let (sample, config) = match sample_and_config(sample, config) {
            Ok(v) => v,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(LtStatus::NullPointer, "out is null");
        }
        match loss_profile(sample, &config) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(LtProfile(p)));
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of candidates, or 0 for a null handle.
///
/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_len(profile: *const LtProfile) -> usize {
    profile.as_ref().map_or(0, |p| p.0.len())
}

/// Search cutoff gamma_n, or NaN for a null handle.
///
/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_gamma_n(profile: *const LtProfile) -> f64 {
    profile.as_ref().map_or(f64::NAN, |p| p.0.gamma_n)
}

/// Penalty weight lambda_n, or NaN for a null handle.
///
/// # Safety
/// `profile` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_lambda_n(profile: *const LtProfile) -> f64 {
    profile.as_ref().map_or(f64::NAN, |p| p.0.lambda_n)
}

/// # Safety
/// `profile` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_entry(
    profile: *const LtProfile,
    index: usize,
    out: *mut LtProfileEntry,
) -> LtStatus {
    guard(|| {
        let (Some(p), false) = (profile.as_ref(), out.is_null()) else {
            return fail(LtStatus::NullPointer, "profile and out must be non-null");
        };
        let Some(e) = p.0.entries.get(index) else {
            return fail(
                LtStatus::OutOfRange,
                format!("index {index} out of range for {} entries", p.0.len()),
            );
        };
        *out = LtProfileEntry {
            u: e.u,
            n_suffix: e.fit.n_used,
            alpha: e.fit.alpha,
            beta: e.fit.beta,
            loss: e.loss,
            penalty: e.penalty,
            penalized: e.penalized,
        };
        LtStatus::Ok
    })
}

/// Penalized argmin of a profile (no refit).
///
/// # Safety
/// `profile` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_estimate(profile: *const LtProfile, out: *mut LtEstimate) -> LtStatus {
    guard(|| {
        let (Some(p), false) = (profile.as_ref(), out.is_null()) else {
            return fail(LtStatus::NullPointer, "profile and out must be non-null");
        };
        match estimate_threshold(&p.0) {
            Ok(e) => {
                *out = (&e).into();
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `profile` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lt_profile_free(profile: *mut LtProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// Estimates the threshold; when `with_refit` is true also refits on
/// x >= u_hat + psi.
///
/// # Safety
/// `sample` must be a live handle, `config` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_estimate(
    sample: *const LtSample,
    config: *const LtPenaltyConfig,
    with_refit: bool,
    psi: f64,
    out: *mut LtEstimate,
) -> LtStatus {
    guard(|| {
        let (sample, config) = match sample_and_config(sample, config) {
            Ok(v) => v,
            Err(status) => return status,
        };
        if out.is_null() {
            return fail(LtStatus::NullPointer, "out is null");
        }
        match estimate(sample, &config, with_refit.then_some(psi)) {
            Ok(e) => {
                *out = (&e).into();
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Least-squares refit on x >= u_hat + psi with Wald statistics.
///
/// # Safety
/// `sample` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lt_refit(sample: *const LtSample, u_hat: f64, psi: f64, out: *mut LtRefit) -> LtStatus {
    guard(|| {
        let (Some(s), false) = (sample.as_ref(), out.is_null()) else {
            return fail(LtStatus::NullPointer, "sample and out must be non-null");
        };
        match refit_beyond(&s.0, u_hat, psi) {
            Ok(r) => {
                *out = (&r).into();
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Writes u_hat(c) for each of the `len` values of a non-decreasing grid into
/// `out_u_hat`. The `c` field of `config` is ignored.
///
/// # Safety
/// `grid` must hold `len` readable doubles and `out_u_hat` room for `len`.
#[no_mangle]
pub unsafe extern "C" fn lt_c_sweep(
    sample: *const LtSample,
    config: *const LtPenaltyConfig,
    grid: *const f64,
    len: usize,
    out_u_hat: *mut f64,
) -> LtStatus {
    guard(|| {
        let (sample, config) = match sample_and_config(sample, config) {
            Ok(v) => v,
            Err(status) => return status,
        };
        if len > 0 && (grid.is_null() || out_u_hat.is_null()) {
            return fail(LtStatus::NullPointer, "grid and out_u_hat must be non-null");
        }
        let grid = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(grid, len)
        };
        match c_sweep(sample, &config, grid) {
            Ok(sweep) => {
                for (i, p) in sweep.points.iter().enumerate() {
                    *out_u_hat.add(i) = p.u_hat;
                }
                LtStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
