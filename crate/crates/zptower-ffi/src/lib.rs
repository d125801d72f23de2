//! C bindings for the tower library: opaque spec handles, status codes
//! mirroring the CLI exit-code map, and JSON-string results.
//!
//! Every returned string is owned by the caller and must be released with
//! `zpt_string_free`. Errors set a thread-local message readable through
//! `zpt_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use zptower::growth::Slack;
use zptower::report::{self, Failure};
use zptower::specfile::SpecFile;
use zptower::tower::TowerSpec;

/// Status of a binding call. Nonzero values follow the CLI exit-code map.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZptStatus {
    Ok = 0,
    Internal = 1,
    ParseError = 2,
    Disconnected = 3,
    NonTorsion = 4,
    Inconsistent = 5,
    DualFailure = 6,
    InvalidArgument = 7,
}

fn status_of(code: u8) -> ZptStatus {
    match code {
        2 => ZptStatus::ParseError,
        3 => ZptStatus::Disconnected,
        4 => ZptStatus::NonTorsion,
        5 => ZptStatus::Inconsistent,
        6 => ZptStatus::DualFailure,
        _ => ZptStatus::Internal,
    }
}

/// Opaque handle for a parsed tower spec.
pub struct ZptSpec {
    file: SpecFile,
    tower: TowerSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(f: Failure) -> ZptStatus {
    set_error(&f.message);
    status_of(f.code)
}

fn run_json<F>(out: *mut *mut c_char, body: F) -> ZptStatus
where
    F: FnOnce() -> Result<serde_json::Value, Failure>,
{
    if out.is_null() {
        set_error("null output pointer");
        return ZptStatus::InvalidArgument;
    }
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(value)) => {
            let text = serde_json::to_string_pretty(&value).expect("serializable");
            let c = CString::new(text).expect("no interior NUL in JSON");
            unsafe { *out = c.into_raw() };
            ZptStatus::Ok
        }
        Ok(Err(f)) => fail(f),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic in zptower".into());
            set_error(&msg);
            ZptStatus::Internal
        }
    }
}

/// Parses a JSON tower spec. On success `*out` owns the handle; release it
/// with `zpt_spec_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_spec_parse(
    json: *const c_char,
    out: *mut *mut ZptSpec,
) -> ZptStatus {
    if json.is_null() || out.is_null() {
        set_error("null argument");
        return ZptStatus::InvalidArgument;
    }
    clear_error();
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        set_error("spec is not valid UTF-8");
        return ZptStatus::ParseError;
    };
    match catch_unwind(|| report::parse_spec(text)) {
        Ok(Ok((file, tower))) => {
            *out = Box::into_raw(Box::new(ZptSpec { file, tower }));
            ZptStatus::Ok
        }
        Ok(Err(f)) => fail(f),
        Err(_) => {
            set_error("panic while parsing spec");
            ZptStatus::Internal
        }
    }
}

/// Releases a spec handle.
///
/// # Safety
/// `spec` must come from `zpt_spec_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zpt_spec_free(spec: *mut ZptSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

unsafe fn deref<'a>(spec: *const ZptSpec) -> Result<&'a ZptSpec, ZptStatus> {
    spec.as_ref().ok_or_else(|| {
        set_error("null spec handle");
        ZptStatus::InvalidArgument
    })
}

/// Number of vertices of X_n, computed without materializing the layer.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_vertex_count(
    spec: *const ZptSpec,
    n: u32,
    out: *mut u64,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    if out.is_null() {
        set_error("null output pointer");
        return ZptStatus::InvalidArgument;
    }
    clear_error();
    match u64::try_from(s.tower.projected_vertex_count(n)) {
        Ok(v) => {
            *out = v;
            ZptStatus::Ok
        }
        Err(_) => {
            set_error("vertex count overflows u64");
            ZptStatus::Internal
        }
    }
}

/// Layer shape and labels as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_layer_json(
    spec: *const ZptSpec,
    n: u32,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    run_json(out, || report::layer_report(&s.file, &s.tower, n))
}

/// Spanning-tree count of X_n with its p-adic valuation, as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_kappa_json(
    spec: *const ZptSpec,
    n: u32,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    run_json(out, || report::kappa_report(&s.file, &s.tower, n))
}

/// Invariant factors of Jac(X_n), as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_jacobian_json(
    spec: *const ZptSpec,
    n: u32,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    run_json(out, || report::jacobian_report(&s.tower, n))
}

/// Characteristic element det(D - B), as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_char_json(
    spec: *const ZptSpec,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    run_json(out, || report::char_report(&s.file, &s.tower).map(|(v, _)| v))
}

/// Characteristic elements of Pic and Jac with (mu, lambda), as JSON.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_invariants_json(
    spec: *const ZptSpec,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    run_json(out, || report::invariants_report(&s.file, &s.tower).map(|(v, _)| v))
}

/// Growth series and consistency verdict, as JSON. A negative slack selects
/// the automatic constant. Inconsistency is reported in the JSON and, for a
/// fixed slack or d = 1, also as the Inconsistent status.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_growth_json(
    spec: *const ZptSpec,
    max_n: u32,
    slack: i64,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let slack = if slack < 0 { Slack::Auto } else { Slack::Fixed(slack as i128) };
    let mut inconsistent = false;
    let status = run_json(out, || {
        let rep = report::growth_report(&s.file, &s.tower, max_n, slack)?;
        inconsistent = !rep.verdict.consistent && !(s.file.d >= 2 && rep.auto_slack);
        Ok(rep.json)
    });
    if status == ZptStatus::Ok && inconsistent {
        set_error("growth series does not match the characteristic element");
        return ZptStatus::Inconsistent;
    }
    status
}

/// Dual layer and dual-tower report, as JSON. A failing tower yields
/// DualFailure with the JSON still written.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zpt_dual_json(
    spec: *const ZptSpec,
    n: u32,
    out: *mut *mut c_char,
) -> ZptStatus {
    let s = match deref(spec) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let mut failed: Option<String> = None;
    let status = run_json(out, || {
        let rep = report::dual_report(&s.file, &s.tower, n)?;
        if !rep.report.pass {
            failed = Some(
                rep.report
                    .first_failure()
                    .unwrap_or_else(|| "dual ramified-count check failed".into()),
            );
        }
        Ok(rep.json)
    });
    if status == ZptStatus::Ok {
        if let Some(msg) = failed {
            set_error(&msg);
            return ZptStatus::DualFailure;
        }
    }
    status
}

/// Copies the last error message into `buf` (NUL-terminated, truncated to
/// `len`). Returns the full message length in bytes, or 0 when there is none.
///
/// # Safety
/// `buf` must point to `len` writable bytes, or be null to query the length.
#[no_mangle]
pub unsafe extern "C" fn zpt_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let borrow = e.borrow();
        let Some(msg) = borrow.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Releases a string returned by any of the *_json functions.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zpt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
