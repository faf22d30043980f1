//! C ABI over the gradekit document runner and field arithmetic.
//!
//! Every function returns a [`GkStatus`] and never unwinds across the
//! boundary. Strings handed out must be released with [`gk_string_free`];
//! handles with their matching `*_free`. On failure a message is available
//! from [`gk_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gradekit::cli::{self, Caps, Document, Format, Report, Status};
use gradekit::ffield::{FieldSpec, FqElem};
use gradekit::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GkStatus {
    Ok = 0,
    /// A computation or parse error; see `gk_last_error`.
    Error = 1,
    /// The answer is negative (for example "not extendable").
    Refuted = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
    Panic = 5,
}

/// Parsed problem document.
pub struct GkDocument(Document);

/// Result of running one command.
pub struct GkReport(Report);

/// A finite field GF(p^k).
pub struct GkField(FieldSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> GkStatus {
    set_error(format!("{}::{}: {e}", e.module(), e.kind()));
    GkStatus::Error
}

fn guard(f: impl FnOnce() -> GkStatus) -> GkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            GkStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, GkStatus> {
    if s.is_null() {
        return Err(GkStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| GkStatus::InvalidUtf8)
}

/// Last error message on this thread, or NULL. Owned by the library.
#[no_mangle]
pub extern "C" fn gk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gk_document_parse(json: *const c_char, out: *mut *mut GkDocument) -> GkStatus {
    guard(|| {
        if out.is_null() {
            return GkStatus::NullArgument;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Document::parse(text) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(GkDocument(d)));
                GkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `doc` must come from `gk_document_parse` (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gk_document_free(doc: *mut GkDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Run `command` on a document. Returns `Refuted` when the report's answer is
/// negative; the report is produced in that case too.
///
/// # Safety
/// Pointers must be valid; `command` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gk_run(doc: *const GkDocument, command: *const c_char, seed: u64, out: *mut *mut GkReport) -> GkStatus {
    guard(|| {
        if doc.is_null() || out.is_null() {
            return GkStatus::NullArgument;
        }
        let cmd = match read_str(command) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match cli::run(cmd, &(*doc).0, seed, Caps::default()) {
            Ok(r) => {
                let status = report_status(&r);
                *out = Box::into_raw(Box::new(GkReport(r)));
                status
            }
            Err(e) => fail(e),
        }
    })
}

fn report_status(r: &Report) -> GkStatus {
    match r.status {
        Status::Refuted => GkStatus::Refuted,
        _ => GkStatus::Ok,
    }
}

/// # Safety
/// `report` must be a valid report handle.
#[no_mangle]
pub unsafe extern "C" fn gk_report_status(report: *const GkReport) -> GkStatus {
    if report.is_null() {
        return GkStatus::NullArgument;
    }
    report_status(&(*report).0)
}

/// Render a report; `structured` non-zero selects JSON. Free the string with
/// `gk_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gk_report_render(report: *const GkReport, structured: i32, out: *mut *mut c_char) -> GkStatus {
    guard(|| {
        if report.is_null() || out.is_null() {
            return GkStatus::NullArgument;
        }
        let fmt = if structured != 0 { Format::Structured } else { Format::Human };
        let text = cli::render(&(*report).0, fmt);
        *out = CString::new(text).expect("no interior nul").into_raw();
        GkStatus::Ok
    })
}

/// # Safety
/// `report` must come from `gk_run` (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn gk_report_free(report: *mut GkReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must come from this library (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn gk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// GF(p^k) with the default modulus.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gk_field_new(p: u64, k: u32, out: *mut *mut GkField) -> GkStatus {
    guard(|| {
        if out.is_null() {
            return GkStatus::NullArgument;
        }
        match FieldSpec::new(p, k, None) {
            Ok(f) => {
                *out = Box::into_raw(Box::new(GkField(f)));
                GkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `field` must come from `gk_field_new` (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn gk_field_free(field: *mut GkField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field order q.
///
/// # Safety
/// `field` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn gk_field_order(field: *const GkField) -> u32 {
    if field.is_null() {
        return 0;
    }
    (*field).0.q()
}

unsafe fn binary(field: *const GkField, a: u32, b: u32, out: *mut u32, op: impl Fn(&FieldSpec, FqElem, FqElem) -> gradekit::Result<FqElem>) -> GkStatus {
    guard(|| {
        if field.is_null() || out.is_null() {
            return GkStatus::NullArgument;
        }
        let f = &(*field).0;
        let (a, b) = (FqElem(a), FqElem(b));
        if !f.contains(a) || !f.contains(b) {
            return fail(Error::FieldMismatch);
        }
        match op(f, a, b) {
            Ok(c) => {
                *out = c.0;
                GkStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Elements are integer codes Σ c_i p^i.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gk_field_add(field: *const GkField, a: u32, b: u32, out: *mut u32) -> GkStatus {
    binary(field, a, b, out, |f, a, b| Ok(f.add(a, b)))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gk_field_mul(field: *const GkField, a: u32, b: u32, out: *mut u32) -> GkStatus {
    binary(field, a, b, out, |f, a, b| Ok(f.mul(a, b)))
}

/// Fails with `Error` on division by zero.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gk_field_div(field: *const GkField, a: u32, b: u32, out: *mut u32) -> GkStatus {
    binary(field, a, b, out, |f, a, b| f.div(a, b))
}
