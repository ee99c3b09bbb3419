//! C ABI over `zhu-core`.
//!
//! A session is an opaque handle holding a run configuration and the outcome
//! of the last run. Strings returned to the caller are owned by the caller and
//! must be released with [`zhu_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zhu_core::arith::{binomial, format_rational};
use zhu_core::cli::{error_status, run, Outcome, RunConfig, EXIT_FAILED_CHECKS, EXIT_USAGE};
use zhu_core::error::Error;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZhuStatus {
    Ok = 0,
    /// The run completed and some check failed (or was inconclusive under the strict policy).
    ChecksFailed = 1,
    /// Invalid configuration or argument.
    Usage = 2,
    /// Internal invariant violated.
    Invariant = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    /// No run has completed on this session.
    NoOutcome = 6,
    Panic = 7,
}

/// Opaque session handle.
pub struct ZhuSession {
    config: RunConfig,
    outcome: Option<Outcome>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> ZhuStatus {
    if error_status(e) == EXIT_USAGE {
        ZhuStatus::Usage
    } else {
        ZhuStatus::Invariant
    }
}

fn guard(f: impl FnOnce() -> Result<ZhuStatus, (ZhuStatus, String)>) -> ZhuStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside zhu-core");
            ZhuStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, (ZhuStatus, String)> {
    if p.is_null() {
        return Err((ZhuStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| (ZhuStatus::InvalidUtf8, e.to_string()))
}

unsafe fn session<'a>(s: *mut ZhuSession) -> Result<&'a mut ZhuSession, (ZhuStatus, String)> {
    s.as_mut().ok_or((ZhuStatus::NullPointer, "null session".into()))
}

fn into_c(text: String) -> *mut c_char {
    CString::new(text).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn zhu_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New session with the default configuration (`all`).
#[no_mangle]
pub extern "C" fn zhu_session_new() -> *mut ZhuSession {
    Box::into_raw(Box::new(ZhuSession { config: RunConfig::default(), outcome: None }))
}

/// # Safety
/// `s` must come from [`zhu_session_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zhu_session_free(s: *mut ZhuSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Replaces the session configuration with a JSON config object. Missing keys take defaults.
///
/// # Safety
/// `s` must be a live session and `json` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zhu_session_configure(s: *mut ZhuSession, json: *const c_char) -> ZhuStatus {
    guard(|| {
        let s = session(s)?;
        let text = read_str(json)?;
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| (ZhuStatus::Usage, e.to_string()))?;
        let cfg = cfg.validated().map_err(|e| (status_of(&e), e.to_string()))?;
        s.config = cfg;
        s.outcome = None;
        Ok(ZhuStatus::Ok)
    })
}

/// Runs the configured command. Returns `ZHU_STATUS_OK` when every check passes.
///
/// # Safety
/// `s` must be a live session.
#[no_mangle]
pub unsafe extern "C" fn zhu_session_run(s: *mut ZhuSession) -> ZhuStatus {
    guard(|| {
        let s = session(s)?;
        let out = run(&s.config).map_err(|e| (status_of(&e), e.to_string()))?;
        let status = if out.exit_status == EXIT_FAILED_CHECKS { ZhuStatus::ChecksFailed } else { ZhuStatus::Ok };
        s.outcome = Some(out);
        Ok(status)
    })
}

#[derive(Clone, Copy)]
#[repr(C)]
pub enum ZhuOutput {
    Report = 0,
    Manifest = 1,
    Text = 2,
}

/// Writes a caller-owned string for the last outcome into `*out`.
///
/// # Safety
/// `s` must be a live session and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zhu_session_output(s: *mut ZhuSession, kind: ZhuOutput, out: *mut *mut c_char) -> ZhuStatus {
    guard(|| {
        let s = session(s)?;
        if out.is_null() {
            return Err((ZhuStatus::NullPointer, "null output pointer".into()));
        }
        let o = s.outcome.as_ref().ok_or((ZhuStatus::NoOutcome, "no run has completed".into()))?;
        let text = match kind {
            ZhuOutput::Report => o.report_json(),
            ZhuOutput::Manifest => o.manifest_json(),
            ZhuOutput::Text => Ok(o.render_text()),
        }
        .map_err(|e| (status_of(&e), e.to_string()))?;
        *out = into_c(text);
        Ok(ZhuStatus::Ok)
    })
}

/// Process exit status the CLI would use for the last outcome, or -1.
///
/// # Safety
/// `s` must be a live session or null.
#[no_mangle]
pub unsafe extern "C" fn zhu_session_exit_status(s: *const ZhuSession) -> i32 {
    s.as_ref().and_then(|s| s.outcome.as_ref()).map_or(-1, |o| o.exit_status)
}

/// Generalized binomial coefficient C(n, k) as caller-owned `p/q` text.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zhu_binomial(n: i64, k: i64, out: *mut *mut c_char) -> ZhuStatus {
    guard(|| {
        if out.is_null() {
            return Err((ZhuStatus::NullPointer, "null output pointer".into()));
        }
        *out = into_c(format_rational(&binomial(n, k)));
        Ok(ZhuStatus::Ok)
    })
}

/// Message for the last error on this thread as a caller-owned string, or null.
#[no_mangle]
pub extern "C" fn zhu_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `p` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zhu_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}
