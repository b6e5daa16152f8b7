//! C ABI over `wcospec-core`.
//!
//! Specs and reports cross the boundary as UTF-8 JSON. Reports live behind
//! an opaque `WcoReport` handle; strings returned from a handle are owned by
//! it and stay valid until `wco_report_free`. Strings returned through a
//! `char **` out-parameter are owned by the caller and must be released
//! with `wco_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use wcospec_core::document::{self, OperatorSpec, ReportDocument};
use wcospec_core::plot::{self, PlotOptions, Window};
use wcospec_core::region::Membership;
use wcospec_core::Error;

/// Return codes. The first four match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcoStatus {
    Ok = 0,
    Internal = 1,
    /// Configuration outside the supported case analysis.
    Unsupported = 2,
    /// Malformed spec or invalid input values.
    Schema = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcoMembership {
    Out = 0,
    In = 1,
    Unknown = 2,
}

/// Opaque analysis result.
pub struct WcoReport {
    doc: ReportDocument,
    json: CString,
    case_tag: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> WcoStatus {
    match e.exit_code() {
        2 => WcoStatus::Unsupported,
        3 => WcoStatus::Schema,
        _ => WcoStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> WcoStatus) -> WcoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == WcoStatus::Ok {
                set_error("");
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            WcoStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, WcoStatus> {
    if p.is_null() {
        set_error("null argument");
        return Err(WcoStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        set_error(&format!("invalid UTF-8: {e}"));
        WcoStatus::InvalidUtf8
    })
}

fn fail(e: Error) -> WcoStatus {
    set_error(&e.to_string());
    status_of(&e)
}

fn to_cstring(s: String) -> CString {
    CString::new(s.replace('\0', " ")).unwrap_or_default()
}

unsafe fn run_spec(spec_json: *const c_char, out: *mut *mut WcoReport, verify: bool) -> WcoStatus {
    if out.is_null() {
        set_error("null out-pointer");
        return WcoStatus::NullArgument;
    }
    *out = ptr::null_mut();
    let text = match read_str(spec_json) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let result = OperatorSpec::parse(text).and_then(|spec| {
        if verify {
            document::verify(&spec)
        } else {
            document::analyze(&spec)
        }
    });
    match result {
        Ok(doc) => {
            let handle = WcoReport {
                json: to_cstring(doc.to_json()),
                case_tag: to_cstring(doc.report.case_tag.clone()),
                doc,
            };
            *out = Box::into_raw(Box::new(handle));
            WcoStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Analyze the operator described by `spec_json`. On success `*out` holds
/// a new handle; on failure it is set to NULL and `wco_last_error` explains.
#[no_mangle]
pub unsafe extern "C" fn wco_analyze(spec_json: *const c_char, out: *mut *mut WcoReport) -> WcoStatus {
    guard(|| run_spec(spec_json, out, false))
}

/// As `wco_analyze`, then run the independent checks.
#[no_mangle]
pub unsafe extern "C" fn wco_verify(spec_json: *const c_char, out: *mut *mut WcoReport) -> WcoStatus {
    guard(|| run_spec(spec_json, out, true))
}

/// Pretty JSON of the full report document. NULL for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn wco_report_json(report: *const WcoReport) -> *const c_char {
    match report.as_ref() {
        Some(r) => r.json.as_ptr(),
        None => ptr::null(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn wco_report_case_tag(report: *const WcoReport) -> *const c_char {
    match report.as_ref() {
        Some(r) => r.case_tag.as_ptr(),
        None => ptr::null(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn wco_report_radii(report: *const WcoReport, rho: *mut f64, rho_min: *mut f64) -> WcoStatus {
    let Some(r) = report.as_ref() else {
        set_error("null report");
        return WcoStatus::NullArgument;
    };
    if !rho.is_null() {
        *rho = r.doc.report.rho;
    }
    if !rho_min.is_null() {
        *rho_min = r.doc.report.rho_min;
    }
    WcoStatus::Ok
}

/// 1 if any check or cited comparison carries a FLAG verdict, 0 if none,
/// -1 for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn wco_report_flagged(report: *const WcoReport) -> c_int {
    match report.as_ref() {
        Some(r) => r.doc.flagged() as c_int,
        None => -1,
    }
}

/// Membership of `re + i·im` in the named spectrum (`"sigma"`,
/// `"sigma_ap"`, `"sigma_usf"`, `"sigma_lsf"`, `"sigma_sf"`, `"sigma_f"`,
/// `"sigma_w"`).
#[no_mangle]
pub unsafe extern "C" fn wco_report_membership(
    report: *const WcoReport,
    spectrum: *const c_char,
    re: f64,
    im: f64,
    tol: f64,
    out: *mut WcoMembership,
) -> WcoStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            set_error("null report");
            return WcoStatus::NullArgument;
        };
        if out.is_null() {
            set_error("null out-pointer");
            return WcoStatus::NullArgument;
        }
        let name = match read_str(spectrum) {
            Ok(n) => n,
            Err(s) => return s,
        };
        let Some((_, entry)) = r.doc.report.spectra.entries().into_iter().find(|(k, _)| *k == name) else {
            return fail(Error::Invalid(format!("unknown spectrum {name:?}")));
        };
        *out = match entry.membership(Complex64::new(re, im), tol) {
            Membership::In => WcoMembership::In,
            Membership::Out => WcoMembership::Out,
            Membership::Unknown => WcoMembership::Unknown,
        };
        WcoStatus::Ok
    })
}

/// Render all seven spectra as SVG into a caller-owned string. A window
/// with `x_min >= x_max` is replaced by one fitted to the report.
#[no_mangle]
pub unsafe extern "C" fn wco_report_svg(
    report: *const WcoReport,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    resolution: usize,
    out: *mut *mut c_char,
) -> WcoStatus {
    guard(|| {
        let Some(r) = report.as_ref() else {
            set_error("null report");
            return WcoStatus::NullArgument;
        };
        if out.is_null() {
            set_error("null out-pointer");
            return WcoStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let window = if x_min < x_max {
            match Window::new(x_min, x_max, y_min, y_max) {
                Ok(w) => Some(w),
                Err(e) => return fail(e),
            }
        } else {
            None
        };
        let opts = PlotOptions {
            window,
            resolution: resolution.max(2),
            ..PlotOptions::default()
        };
        match plot::render(&r.doc.report, &opts) {
            Ok(p) => {
                *out = to_cstring(p.svg).into_raw();
                WcoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// One-line description of the spec's map, caller-owned.
#[no_mangle]
pub unsafe extern "C" fn wco_classify_map(spec_json: *const c_char, out: *mut *mut c_char) -> WcoStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out-pointer");
            return WcoStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(spec_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match OperatorSpec::parse(text).and_then(|s| document::classify_summary(&s)) {
            Ok(line) => {
                *out = to_cstring(line).into_raw();
                WcoStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn wco_report_free(report: *mut WcoReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[no_mangle]
pub unsafe extern "C" fn wco_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wco_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn wco_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
