//! C ABI for the port-based teleportation fidelity library.
//!
//! Reports are opaque heap handles released with [`pbt_report_free`].
//! Every fallible call returns a [`PbtStatus`]; the message of the last
//! failure on the calling thread is available from
//! [`pbt_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pbt::fidelity::{FidelityReport, PortCoefficients, ProtocolMode, Settings};
use pbt::oracle::OracleConfig;
use pbt::young::{BranchingTable, Partition};
use pbt::PbtError;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidCoefficients = 3,
    SizeCap = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbtMode {
    Standard = 0,
    GivenCoefficients = 1,
    Optimized = 2,
}

impl From<ProtocolMode> for PbtMode {
    fn from(m: ProtocolMode) -> Self {
        match m {
            ProtocolMode::Standard => PbtMode::Standard,
            ProtocolMode::GivenCoefficients => PbtMode::GivenCoefficients,
            ProtocolMode::Optimized => PbtMode::Optimized,
        }
    }
}

/// Opaque fidelity report.
pub struct PbtReport {
    inner: FidelityReport,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &PbtError) -> PbtStatus {
    match e {
        PbtError::SizeCap { .. } | PbtError::ProjectorOrder { .. } => PbtStatus::SizeCap,
        PbtError::InvalidCoefficients { .. } => PbtStatus::InvalidCoefficients,
        PbtError::Numerical(_) | PbtError::InvalidPovm { .. } => PbtStatus::Numerical,
        _ => PbtStatus::InvalidArgument,
    }
}

// Runs `f`, recording errors and turning panics into `PbtStatus::Panic`.
fn guarded(f: impl FnOnce() -> Result<(), (PbtStatus, String)>) -> PbtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PbtStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PbtStatus::Panic
        }
    }
}

fn lift<T>(r: pbt::Result<T>) -> Result<T, (PbtStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null_error(name: &str) -> (PbtStatus, String) {
    (PbtStatus::NullPointer, format!("{name} is null"))
}

fn settings() -> Result<Settings, (PbtStatus, String)> {
    lift(Settings::from_env())
}

fn emit(out: *mut *mut PbtReport, report: FidelityReport) -> Result<(), (PbtStatus, String)> {
    let json = serde_json::to_string(&report).map_err(|e| (PbtStatus::Numerical, e.to_string()))?;
    let handle = Box::new(PbtReport {
        inner: report,
        json: CString::new(json).unwrap_or_default(),
    });
    // SAFETY: the caller checked `out` for null and owns the slot.
    unsafe { *out = Box::into_raw(handle) };
    Ok(())
}

/// Fidelity of the standard protocol. On success `*out` holds a new report.
#[no_mangle]
pub extern "C" fn pbt_fidelity_standard(d: u32, n: u32, out: *mut *mut PbtReport) -> PbtStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_error("out"));
        }
        emit(out, lift(settings()?.fidelity_standard(d, n))?)
    })
}

/// Optimal fidelity over symmetric port states, with the maximizing
/// coefficients attached to the report.
#[no_mangle]
pub extern "C" fn pbt_fidelity_optimized(d: u32, n: u32, out: *mut *mut PbtReport) -> PbtStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_error("out"));
        }
        emit(out, lift(settings()?.optimize_coefficients(d, n))?)
    })
}

/// Fidelity for given coefficients.
///
/// Partition `k` has `row_counts[k]` rows taken consecutively from `rows`,
/// and coefficient `values[k]`. Partitions not listed are zero. With
/// `renormalize` false a violated normalization is rejected.
///
/// # Safety
///
/// `row_counts` and `values` must point to `count` elements and `rows` to
/// their sum.
#[no_mangle]
pub unsafe extern "C" fn pbt_fidelity_given(
    d: u32,
    n: u32,
    rows: *const u32,
    row_counts: *const usize,
    values: *const f64,
    count: usize,
    renormalize: bool,
    out: *mut *mut PbtReport,
) -> PbtStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null_error("out"));
        }
        if count > 0 && (row_counts.is_null() || values.is_null()) {
            return Err(null_error("row_counts or values"));
        }
        let (counts, vals) = if count == 0 {
            (&[][..], &[][..])
        } else {
            // SAFETY: non-null and sized per the contract above.
            unsafe { (std::slice::from_raw_parts(row_counts, count), std::slice::from_raw_parts(values, count)) }
        };
        let total: usize = counts.iter().sum();
        if total > 0 && rows.is_null() {
            return Err(null_error("rows"));
        }
        let all_rows = if total == 0 {
            &[][..]
        } else {
            // SAFETY: as above.
            unsafe { std::slice::from_raw_parts(rows, total) }
        };
        let mut entries = Vec::with_capacity(count);
        let mut offset = 0;
        for (&k, &v) in counts.iter().zip(vals) {
            entries.push((lift(Partition::new(all_rows[offset..offset + k].to_vec()))?, v));
            offset += k;
        }
        let settings = settings()?;
        let table = lift(BranchingTable::with_threshold(d, n, settings.exact_threshold))?;
        let c = if renormalize {
            lift(PortCoefficients::renormalized(&table, entries))?
        } else {
            lift(PortCoefficients::new(&table, entries))?
        };
        emit(out, lift(pbt::fidelity::given_from_table(&table, &c))?)
    })
}

fn report<'a>(r: *const PbtReport) -> Option<&'a PbtReport> {
    // SAFETY: non-null handles come from `Box::into_raw` in `emit`.
    unsafe { r.as_ref() }
}

/// Entanglement fidelity `F`, or NaN for a null handle.
#[no_mangle]
pub extern "C" fn pbt_report_fidelity(r: *const PbtReport) -> f64 {
    report(r).map_or(f64::NAN, |r| r.inner.fidelity)
}

/// Success probability `d^2 F / N`, or NaN for a null handle.
#[no_mangle]
pub extern "C" fn pbt_report_success_probability(r: *const PbtReport) -> f64 {
    report(r).map_or(f64::NAN, |r| r.inner.success_probability)
}

#[no_mangle]
pub extern "C" fn pbt_report_d(r: *const PbtReport) -> u32 {
    report(r).map_or(0, |r| r.inner.d)
}

#[no_mangle]
pub extern "C" fn pbt_report_n(r: *const PbtReport) -> u32 {
    report(r).map_or(0, |r| r.inner.n)
}

#[no_mangle]
pub extern "C" fn pbt_report_mode(r: *const PbtReport) -> PbtMode {
    report(r).map_or(PbtMode::Standard, |r| r.inner.mode.into())
}

/// Whether the top eigenvalue behind an optimized report was degenerate.
#[no_mangle]
pub extern "C" fn pbt_report_degenerate(r: *const PbtReport) -> bool {
    report(r).is_some_and(|r| r.inner.degenerate)
}

/// Number of coefficients attached to the report; zero for the standard
/// protocol.
#[no_mangle]
pub extern "C" fn pbt_report_coefficient_count(r: *const PbtReport) -> usize {
    report(r)
        .and_then(|r| r.inner.coefficients.as_ref())
        .map_or(0, |c| c.len())
}

/// Coefficient `index` in canonical partition order. Writes its value and
/// up to `rows_capacity` row lengths; `*rows_len` receives the full row
/// count.
///
/// # Safety
///
/// `rows` must have room for `rows_capacity` elements; `value` and
/// `rows_len` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbt_report_coefficient(
    r: *const PbtReport,
    index: usize,
    value: *mut f64,
    rows: *mut u32,
    rows_capacity: usize,
    rows_len: *mut usize,
) -> PbtStatus {
    guarded(|| {
        let r = report(r).ok_or_else(|| null_error("report"))?;
        if value.is_null() || rows_len.is_null() || (rows_capacity > 0 && rows.is_null()) {
            return Err(null_error("output pointer"));
        }
        let c = r
            .inner
            .coefficients
            .as_ref()
            .ok_or_else(|| (PbtStatus::InvalidArgument, "report has no coefficients".to_string()))?;
        let (mu, v) = c
            .iter()
            .nth(index)
            .ok_or_else(|| (PbtStatus::InvalidArgument, format!("index {index} out of range")))?;
        // SAFETY: checked above; the caller sized `rows`.
        unsafe {
            *value = v;
            *rows_len = mu.rows();
            for (k, &part) in mu.parts().iter().take(rows_capacity).enumerate() {
                *rows.add(k) = part;
            }
        }
        Ok(())
    })
}

/// The report as a JSON object. The string is owned by the report.
#[no_mangle]
pub extern "C" fn pbt_report_json(r: *const PbtReport) -> *const c_char {
    report(r).map_or(ptr::null(), |r| r.json.as_ptr())
}

/// Releases a report. Null is ignored.
///
/// # Safety
///
/// `r` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pbt_report_free(r: *mut PbtReport) {
    if !r.is_null() {
        // SAFETY: produced by `Box::into_raw` in `emit`.
        drop(unsafe { Box::from_raw(r) });
    }
}

/// `1 - (d^2 - 1) / (4N)`.
#[no_mangle]
pub extern "C" fn pbt_asymptote_standard(d: u32, n: u32) -> f64 {
    pbt::fidelity::asymptote_standard(d, n)
}

/// `max(0, 1 - (d^2 - 1) / N)`.
#[no_mangle]
pub extern "C" fn pbt_lower_bound_standard(d: u32, n: u32) -> f64 {
    pbt::fidelity::lower_bound_standard(d, n)
}

/// Runs the dense oracle checks for the standard or optimized protocol.
/// `*passed` tells whether all checks held; `*margin` receives the worst
/// certificate slack.
///
/// # Safety
///
/// `passed` and `margin` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pbt_verify(d: u32, n: u32, mode: PbtMode, passed: *mut bool, margin: *mut f64) -> PbtStatus {
    guarded(|| {
        if passed.is_null() || margin.is_null() {
            return Err(null_error("output pointer"));
        }
        let mode = match mode {
            PbtMode::Standard => ProtocolMode::Standard,
            PbtMode::Optimized => ProtocolMode::Optimized,
            PbtMode::GivenCoefficients => {
                return Err((
                    PbtStatus::InvalidArgument,
                    "verify supports the standard and optimized modes".into(),
                ))
            }
        };
        let config = lift(OracleConfig::from_env())?;
        let v = lift(config.verify(&settings()?, d, n, mode, None))?;
        // SAFETY: checked above.
        unsafe {
            *passed = v.passed;
            *margin = v.certificate_margin;
        }
        Ok(())
    })
}

/// Message of the last failure on this thread; empty when none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pbt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn pbt_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
