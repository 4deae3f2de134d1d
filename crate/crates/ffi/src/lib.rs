//! C interface to the cqual metrics and statistics.
//!
//! Every fallible function returns a [`CqStatus`]; on failure a message is
//! available from [`cq_last_error`] on the same thread. Output buffers are
//! caller-allocated. Measurements are opaque handles released with
//! [`cq_measurement_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cqual::stats::{self, StatsError};
use cqual::{Measurement, Metric, StyleCounts};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The series has no variance, so its autocorrelation is undefined.
    ConstantSeries = 3,
    TooShort = 4,
    EmptySample = 5,
    BufferTooSmall = 6,
    /// A Rust panic was caught at the boundary.
    Internal = 7,
}

/// The eleven per-file quality metrics.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqMetric {
    Cd = 0,
    Cs,
    Fn,
    Fs,
    Gd,
    Il,
    Ll,
    Ln,
    Qd,
    Si,
    Sn,
}

/// Raw counts behind the metrics, in timeline column order.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CqCount {
    Statements = 0,
    Chars,
    CommentChars,
    Comments,
    Functions,
    Lines,
    Gotos,
    QuestionableWords,
    IdentifiersUnique,
    SumUniqueIdentifierLen,
    SumNesting,
    NestedLines,
}

/// Number of style counters: 20 rules, each with two alternatives.
pub const CQ_STYLE_COUNTERS: usize = 40;

/// Opaque measurement of one source file.
pub struct CqMeasurement(Measurement);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: CqStatus, msg: impl Into<String>) -> CqStatus {
    set_error(msg);
    status
}

fn from_stats(e: StatsError) -> CqStatus {
    let status = match e {
        StatsError::ConstantSeries => CqStatus::ConstantSeries,
        StatsError::TooShort { .. } => CqStatus::TooShort,
        StatsError::Empty => CqStatus::EmptySample,
        StatsError::Invalid(_) => CqStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning a panic into [`CqStatus::Internal`].
fn guard(f: impl FnOnce() -> CqStatus) -> CqStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CqStatus::Internal, "internal error"),
    }
}

/// # Safety
/// `ptr` must be null or point to `len` readable values.
unsafe fn slice<'a, T>(ptr: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

/// # Safety
/// `ptr` must be null or point to `len` writable values.
unsafe fn slice_mut<'a, T>(ptr: *mut T, len: usize) -> Option<&'a mut [T]> {
    if len == 0 {
        Some(&mut [])
    } else if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts_mut(ptr, len))
    }
}

fn metric(m: CqMetric) -> Metric {
    Metric::ALL[m as usize]
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn cq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Measures `len` bytes of C source. On success `*out` owns a new handle.
///
/// # Safety
/// `src` must point to `len` readable bytes (or be NULL when `len` is 0);
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_measure(src: *const u8, len: usize, out: *mut *mut CqMeasurement) -> CqStatus {
    guard(|| {
        if out.is_null() {
            return fail(CqStatus::NullPointer, "out is NULL");
        }
        let Some(bytes) = slice(src, len) else {
            return fail(CqStatus::NullPointer, "src is NULL");
        };
        *out = Box::into_raw(Box::new(CqMeasurement(cqual::measure(bytes))));
        CqStatus::Ok
    })
}

/// Releases a handle from [`cq_measure`]. NULL is ignored.
///
/// # Safety
/// `m` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cq_measurement_free(m: *mut CqMeasurement) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// One of the eleven metrics. Ratios with a zero denominator are 0.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_measurement_metric(m: *const CqMeasurement, which: CqMetric, out: *mut f64) -> CqStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return fail(CqStatus::NullPointer, "NULL argument");
        }
        *out = (*m).0.metrics.get(metric(which));
        CqStatus::Ok
    })
}

/// One of the raw counts.
///
/// # Safety
/// `m` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_measurement_count(m: *const CqMeasurement, which: CqCount, out: *mut u64) -> CqStatus {
    guard(|| {
        if m.is_null() || out.is_null() {
            return fail(CqStatus::NullPointer, "NULL argument");
        }
        *out = (*m).0.metrics.counts()[which as usize];
        CqStatus::Ok
    })
}

/// Copies the 40 style counters (rule by rule, alternative a then b).
///
/// # Safety
/// `m` must be a live handle; `out` must hold `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn cq_measurement_style(m: *const CqMeasurement, out: *mut u64, out_len: usize) -> CqStatus {
    guard(|| {
        if m.is_null() {
            return fail(CqStatus::NullPointer, "measurement is NULL");
        }
        if out_len < CQ_STYLE_COUNTERS {
            return fail(CqStatus::BufferTooSmall, format!("need {CQ_STYLE_COUNTERS} counters, got {out_len}"));
        }
        let Some(buf) = slice_mut(out, out_len) else {
            return fail(CqStatus::NullPointer, "out is NULL");
        };
        for (slot, v) in buf.iter_mut().zip((*m).0.style.values()) {
            *slot = v;
        }
        CqStatus::Ok
    })
}

/// Style inconsistency of 40 counters laid out as by [`cq_measurement_style`].
///
/// # Safety
/// `counts` must hold `len` values and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cq_style_inconsistency(counts: *const u64, len: usize, out: *mut f64) -> CqStatus {
    guard(|| {
        if out.is_null() {
            return fail(CqStatus::NullPointer, "out is NULL");
        }
        let Some(values) = slice(counts, len) else {
            return fail(CqStatus::NullPointer, "counts is NULL");
        };
        let Some(style) = StyleCounts::from_values(values) else {
            return fail(CqStatus::InvalidArgument, format!("expected {CQ_STYLE_COUNTERS} counters, got {len}"));
        };
        *out = cqual::style_inconsistency(&style);
        CqStatus::Ok
    })
}

/// Sample autocorrelation at lags 1..=max_lag, written to `out[0..max_lag]`.
///
/// # Safety
/// `x` must hold `n` values and `out` `out_len` values.
#[no_mangle]
pub unsafe extern "C" fn cq_acf(x: *const f64, n: usize, max_lag: usize, out: *mut f64, out_len: usize) -> CqStatus {
    guard(|| {
        let Some(series) = slice(x, n) else {
            return fail(CqStatus::NullPointer, "x is NULL");
        };
        if out_len < max_lag {
            return fail(CqStatus::BufferTooSmall, format!("need {max_lag} slots, got {out_len}"));
        }
        let Some(buf) = slice_mut(out, out_len) else {
            return fail(CqStatus::NullPointer, "out is NULL");
        };
        match stats::acf(series, max_lag) {
            Ok(rho) => {
                buf[..rho.len()].copy_from_slice(&rho);
                CqStatus::Ok
            }
            Err(e) => from_stats(e),
        }
    })
}

/// Ljung-Box statistic over the first `h` autocorrelations `rho` of a series
/// of length `n`, and its chi-square p-value.
///
/// # Safety
/// `rho` must hold `rho_len` values; `q` and `p` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cq_ljung_box(
    rho: *const f64,
    rho_len: usize,
    n: usize,
    h: usize,
    q: *mut f64,
    p: *mut f64,
) -> CqStatus {
    guard(|| {
        if q.is_null() || p.is_null() {
            return fail(CqStatus::NullPointer, "q or p is NULL");
        }
        let Some(rho) = slice(rho, rho_len) else {
            return fail(CqStatus::NullPointer, "rho is NULL");
        };
        match stats::ljung_box(rho, n, h) {
            Ok((stat, pv)) => {
                *q = stat;
                *p = pv;
                CqStatus::Ok
            }
            Err(e) => from_stats(e),
        }
    })
}

/// Two-sample Kolmogorov-Smirnov test: statistic `d` and asymptotic p-value.
///
/// # Safety
/// `x` and `y` must hold `nx` and `ny` values; `d` and `p` must be valid.
#[no_mangle]
pub unsafe extern "C" fn cq_ks_two_sample(
    x: *const f64,
    nx: usize,
    y: *const f64,
    ny: usize,
    d: *mut f64,
    p: *mut f64,
) -> CqStatus {
    guard(|| {
        if d.is_null() || p.is_null() {
            return fail(CqStatus::NullPointer, "d or p is NULL");
        }
        let (Some(x), Some(y)) = (slice(x, nx), slice(y, ny)) else {
            return fail(CqStatus::NullPointer, "sample is NULL");
        };
        match stats::ks_two_sample(x, y) {
            Ok(r) => {
                *d = r.d;
                *p = r.p_value;
                CqStatus::Ok
            }
            Err(e) => from_stats(e),
        }
    })
}

/// Benjamini-Hochberg adjusted p-values, in input order. `out` may alias `p`.
///
/// # Safety
/// `p` and `out` must each hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn cq_bh_adjust(p: *const f64, n: usize, out: *mut f64) -> CqStatus {
    guard(|| {
        let Some(values) = slice(p, n).map(<[f64]>::to_vec) else {
            return fail(CqStatus::NullPointer, "p is NULL");
        };
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return fail(CqStatus::InvalidArgument, format!("p-value {bad} outside [0, 1]"));
        }
        let Some(buf) = slice_mut(out, n) else {
            return fail(CqStatus::NullPointer, "out is NULL");
        };
        buf.copy_from_slice(&stats::bh_adjust(&values));
        CqStatus::Ok
    })
}
