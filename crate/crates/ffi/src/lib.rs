//! C ABI over the batch front end: jobs in, JSON reports out.
//!
//! Every entry point returns a [`TcStatus`]; on failure the message is kept per thread
//! and read with [`tc_last_error_message`]. Handles are opaque and owned by the caller
//! until passed to their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use tailcalc::cli::{execute, Command, Mode};
use tailcalc::error::{Category, Error};

/// Status codes; the nonzero error values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcStatus {
    Ok = 0,
    ParseError = 1,
    PreconditionViolated = 2,
    HigherOrderNeeded = 3,
    InternalError = 4,
    NullArgument = 5,
    OutOfRange = 6,
    NotEvaluable = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TcMode {
    Exact = 0,
    Float = 1,
}

/// A parsed problem document bound to a command.
pub struct TcJob {
    command: Command,
    mode: Mode,
    doc: Value,
}

/// The result of running a job.
pub struct TcReport {
    report: Value,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: TcStatus, msg: &str) -> TcStatus {
    set_error(msg);
    status
}

fn from_error(err: &Error) -> TcStatus {
    let status = match err.category() {
        Category::Parse => TcStatus::ParseError,
        Category::Precondition => TcStatus::PreconditionViolated,
        Category::Indeterminate => TcStatus::HigherOrderNeeded,
        Category::Internal => TcStatus::InternalError,
    };
    fail(status, &err.to_string())
}

fn guard(f: impl FnOnce() -> TcStatus) -> TcStatus {
    clear_error();
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(TcStatus::InternalError, "panic inside tailcalc"))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, TcStatus> {
    if p.is_null() {
        return Err(fail(TcStatus::NullArgument, &format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(TcStatus::ParseError, &format!("{what} is not UTF-8")))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next `tc_` call on the same thread.
#[no_mangle]
pub extern "C" fn tc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses `input_json` for `command` (e.g. `"expand"`, `"implicit-renewal"`).
///
/// # Safety
/// `command` and `input_json` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_job_new(
    command: *const c_char,
    mode: TcMode,
    input_json: *const c_char,
    out: *mut *mut TcJob,
) -> TcStatus {
    guard(|| {
        if out.is_null() {
            return fail(TcStatus::NullArgument, "out is null");
        }
        *out = ptr::null_mut();
        let (cmd, doc) = match (text(command, "command"), text(input_json, "input_json")) {
            (Ok(c), Ok(d)) => (c, d),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let command = match cmd.parse::<Command>() {
            Ok(c) => c,
            Err(e) => return from_error(&e),
        };
        let doc: Value = match serde_json::from_str(doc) {
            Ok(v) => v,
            Err(e) => return fail(TcStatus::ParseError, &format!("input_json: {e}")),
        };
        let mode = match mode {
            TcMode::Exact => Mode::Exact,
            TcMode::Float => Mode::Float,
        };
        *out = Box::into_raw(Box::new(TcJob { command, mode, doc }));
        TcStatus::Ok
    })
}

/// Runs a job; the job stays owned by the caller.
///
/// # Safety
/// `job` must come from [`tc_job_new`] and not be freed; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_job_run(job: *const TcJob, out: *mut *mut TcReport) -> TcStatus {
    guard(|| {
        if job.is_null() || out.is_null() {
            return fail(TcStatus::NullArgument, "job or out is null");
        }
        *out = ptr::null_mut();
        let job = &*job;
        match execute(job.command, job.mode, &job.doc) {
            Ok(report) => {
                *out = Box::into_raw(Box::new(TcReport { report }));
                TcStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// # Safety
/// `job` must come from [`tc_job_new`] or be NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_job_free(job: *mut TcJob) {
    if !job.is_null() {
        drop(Box::from_raw(job));
    }
}

/// The report as JSON; free the string with [`tc_string_free`].
///
/// # Safety
/// `report` must come from [`tc_job_run`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_report_json(report: *const TcReport, pretty: bool, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(TcStatus::NullArgument, "report or out is null");
        }
        let v = &(*report).report;
        let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
        match s.ok().and_then(|s| CString::new(s).ok()) {
            Some(c) => {
                *out = c.into_raw();
                TcStatus::Ok
            }
            None => fail(TcStatus::InternalError, "report is not serializable"),
        }
    })
}

fn coefficients(r: &TcReport) -> &[Value] {
    r.report["result"]["tail"]["coefficients"].as_array().map_or(&[], Vec::as_slice)
}

/// Number of tail coefficients in the report (zero when the command produces none).
///
/// # Safety
/// `report` must come from [`tc_job_run`] or be NULL.
#[no_mangle]
pub unsafe extern "C" fn tc_report_coefficient_count(report: *const TcReport) -> usize {
    report.as_ref().map_or(0, |r| coefficients(r).len())
}

/// Float value of tail coefficient `i`.
///
/// # Safety
/// `report` must come from [`tc_job_run`]; `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_report_coefficient(report: *const TcReport, i: usize, value: *mut f64) -> TcStatus {
    guard(|| {
        if report.is_null() || value.is_null() {
            return fail(TcStatus::NullArgument, "report or value is null");
        }
        let Some(c) = coefficients(&*report).get(i) else {
            return fail(TcStatus::OutOfRange, &format!("coefficient {i} out of range"));
        };
        match c["float"].as_f64() {
            Some(x) => {
                *value = x;
                TcStatus::Ok
            }
            None => fail(TcStatus::NotEvaluable, &format!("coefficient {i} has no numeric value: {}", c["exact"])),
        }
    })
}

/// Exact form of tail coefficient `i`; free with [`tc_string_free`].
///
/// # Safety
/// `report` must come from [`tc_job_run`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tc_report_coefficient_exact(report: *const TcReport, i: usize, out: *mut *mut c_char) -> TcStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return fail(TcStatus::NullArgument, "report or out is null");
        }
        let Some(s) = coefficients(&*report).get(i).and_then(|c| c["exact"].as_str()) else {
            return fail(TcStatus::OutOfRange, &format!("coefficient {i} out of range"));
        };
        match CString::new(s) {
            Ok(c) => {
                *out = c.into_raw();
                TcStatus::Ok
            }
            Err(_) => fail(TcStatus::InternalError, "coefficient contains NUL"),
        }
    })
}

/// # Safety
/// `report` must come from [`tc_job_run`] or be NULL; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tc_report_free(report: *mut TcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be a string returned by this library, or NULL, and not freed before.
#[no_mangle]
pub unsafe extern "C" fn tc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
