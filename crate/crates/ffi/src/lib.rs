//! C interface to towerlab.
//!
//! Specs are opaque handles created by the `towerlab_spec_*` constructors and
//! released with [`towerlab_spec_free`]. Strings returned through out
//! parameters are owned by the caller and released with
//! [`towerlab_string_free`]. Every function returns a [`TowerlabStatus`]; on
//! failure [`towerlab_last_error`] describes the most recent error on the
//! calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use towerlab::analysis::{limit_report, report_json};
use towerlab::towergen::{q5_instance_with, standard_family, validate_spec, TowerSpec};
use towerlab::{Budget, Error, ErrorKind, FieldTower};

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerlabStatus {
    Ok = 0,
    /// A mathematical check or precondition failed.
    CheckFailed = 1,
    /// Invalid parameters or a request outside the configured bounds.
    ConfigError = 2,
    /// An internal consistency assertion fired.
    Internal = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// The library panicked; the call had no effect.
    Panic = 6,
}

/// Opaque handle to a tower spec.
pub struct TowerlabSpec {
    inner: TowerSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> TowerlabStatus {
    match err.kind() {
        ErrorKind::Config => TowerlabStatus::ConfigError,
        ErrorKind::Check => TowerlabStatus::CheckFailed,
        ErrorKind::Internal => TowerlabStatus::Internal,
    }
}

/// Failure inside a call, before it is reported through the C boundary.
enum Fail {
    Lib(Error),
    Status(TowerlabStatus, &'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn guard(body: impl FnOnce() -> Result<TowerlabStatus, Fail>) -> TowerlabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            TowerlabStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Status(
            TowerlabStatus::NullPointer,
            "null string argument",
        ));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::Status(TowerlabStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn spec_ref<'a>(spec: *const TowerlabSpec) -> Result<&'a TowerSpec, Fail> {
    spec.as_ref().map(|s| &s.inner).ok_or(Fail::Status(
        TowerlabStatus::NullPointer,
        "null spec handle",
    ))
}

fn check_out<T>(out: *mut T) -> Result<(), Fail> {
    if out.is_null() {
        Err(Fail::Status(
            TowerlabStatus::NullPointer,
            "null out pointer",
        ))
    } else {
        Ok(())
    }
}

unsafe fn put_spec(out: *mut *mut TowerlabSpec, spec: TowerSpec) -> TowerlabStatus {
    *out = Box::into_raw(Box::new(TowerlabSpec { inner: spec }));
    TowerlabStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s)
        .map_err(|_| Fail::Status(TowerlabStatus::Internal, "interior NUL in output"))?;
    *out = c.into_raw();
    Ok(())
}

fn budget() -> Result<Budget, Fail> {
    Ok(Budget::from_env()?)
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn towerlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The worked instance over `F_5`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_q5(out: *mut *mut TowerlabSpec) -> TowerlabStatus {
    guard(|| {
        check_out(out)?;
        Ok(put_spec(out, q5_instance_with(budget()?)?))
    })
}

/// Member `(b, n)` of the `a = t = 0` family over `F_{p^ext}`; `b` and `n`
/// are field elements in canonical text form.
///
/// # Safety
/// `b` and `n` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_family(
    p: u32,
    ext: u32,
    b: *const c_char,
    n: *const c_char,
    out: *mut *mut TowerlabSpec,
) -> TowerlabStatus {
    guard(|| {
        check_out(out)?;
        let (b, n) = (read_str(b)?, read_str(n)?);
        let tower = Arc::new(FieldTower::build(p, ext, 2, budget()?, &[])?);
        let base = tower.base();
        let (b, n) = (base.parse(b)?, base.parse(n)?);
        Ok(put_spec(out, standard_family(tower, b, n)?))
    })
}

/// Loads a spec from its JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_from_json(
    json: *const c_char,
    out: *mut *mut TowerlabSpec,
) -> TowerlabStatus {
    guard(|| {
        check_out(out)?;
        let text = read_str(json)?;
        Ok(put_spec(out, TowerSpec::from_json(text, budget()?)?))
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `spec` must be null or a handle returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_free(spec: *mut TowerlabSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Field size `q` behind the handle, or 0 for a null handle.
///
/// # Safety
/// `spec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_q(spec: *const TowerlabSpec) -> u64 {
    spec.as_ref().map_or(0, |s| s.inner.q())
}

/// JSON document for the handle.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_to_json(
    spec: *const TowerlabSpec,
    out: *mut *mut c_char,
) -> TowerlabStatus {
    guard(|| {
        check_out(out)?;
        let spec = spec_ref(spec)?;
        put_string(out, spec.to_json())?;
        Ok(TowerlabStatus::Ok)
    })
}

/// Runs every named premise check. Returns `Ok` when all pass and
/// `CheckFailed` otherwise; in both cases `out` receives the JSON object
/// `{name: pass}`.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_validate(
    spec: *const TowerlabSpec,
    out: *mut *mut c_char,
) -> TowerlabStatus {
    guard(|| {
        check_out(out)?;
        let report = validate_spec(spec_ref(spec)?);
        put_string(out, serde_json::to_string(&report).map_err(Error::from)?)?;
        if report.passed() {
            Ok(TowerlabStatus::Ok)
        } else {
            set_last_error(format!("failed checks: {}", report.failures().join(", ")));
            Ok(TowerlabStatus::CheckFailed)
        }
    })
}

/// Limit table for levels `0..=m_max` as JSON.
///
/// # Safety
/// `spec` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn towerlab_spec_analyze_json(
    spec: *const TowerlabSpec,
    m_max: u32,
    out: *mut *mut c_char,
) -> TowerlabStatus {
    guard(|| {
        check_out(out)?;
        let report = limit_report(spec_ref(spec)?, m_max as usize)?;
        put_string(out, report_json(&report).to_string())?;
        Ok(TowerlabStatus::Ok)
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn towerlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
