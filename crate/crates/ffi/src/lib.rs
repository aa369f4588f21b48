//! C interface. A certificate is produced behind an opaque handle; callers read its exit
//! code and JSON, then release it with `mvf_certificate_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use montesinos_vf::certificate::{certify, CaseChoice, Certificate, Options};
use montesinos_vf::slopes::QChoice;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    BadArgument = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MvfCase {
    Auto = 0,
    I = 1,
    II = 2,
}

/// Opaque handle; only ever seen behind a pointer.
pub struct MvfCertificate {
    certificate: Certificate,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Message for the last failing call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn mvf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Run the pipeline on a comma-separated tangle list.
///
/// `q_auto` nonzero ignores `q`. On success `*out` receives a handle owned by the caller.
///
/// # Safety
/// `tangles` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mvf_certify(
    tangles: *const c_char,
    q: i64,
    q_auto: i32,
    case: MvfCase,
    two_component: i32,
    include_matrix: i32,
    out: *mut *mut MvfCertificate,
) -> MvfStatus {
    if tangles.is_null() || out.is_null() {
        set_error("null pointer argument");
        return MvfStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let Ok(text) = CStr::from_ptr(tangles).to_str() else {
        set_error("tangle string is not UTF-8");
        return MvfStatus::InvalidUtf8;
    };
    if q_auto == 0 && q == 0 {
        set_error("q must be nonzero");
        return MvfStatus::BadArgument;
    }
    let opts = Options {
        q: if q_auto != 0 { QChoice::Auto } else { QChoice::Fixed(q) },
        case: match case {
            MvfCase::Auto => CaseChoice::Auto,
            MvfCase::I => CaseChoice::I,
            MvfCase::II => CaseChoice::II,
        },
        matrix: include_matrix != 0,
        two_component: two_component != 0,
    };
    let run = match std::panic::catch_unwind(|| certify(text, opts)) {
        Ok(Ok(run)) => run,
        Ok(Err(e)) => {
            set_error(e.to_string());
            return MvfStatus::ParseError;
        }
        Err(_) => {
            set_error("internal panic");
            return MvfStatus::Internal;
        }
    };
    let json = match serde_json::to_string_pretty(&run.certificate).map(CString::new) {
        Ok(Ok(j)) => j,
        _ => {
            set_error("certificate serialization failed");
            return MvfStatus::Internal;
        }
    };
    *out = Box::into_raw(Box::new(MvfCertificate { certificate: run.certificate, json }));
    MvfStatus::Ok
}

/// 0 certified, 2 structurally unmatched, 3 a condition failed; -1 for NULL.
///
/// # Safety
/// `cert` must be NULL or a live handle from `mvf_certify`.
#[no_mangle]
pub unsafe extern "C" fn mvf_certificate_exit_code(cert: *const MvfCertificate) -> i32 {
    match cert.as_ref() {
        Some(c) => c.certificate.verdict.exit_code(),
        None => -1,
    }
}

/// Pretty JSON of the certificate, borrowed from the handle.
///
/// # Safety
/// `cert` must be NULL or a live handle; the string dies with the handle.
#[no_mangle]
pub unsafe extern "C" fn mvf_certificate_json(cert: *const MvfCertificate) -> *const c_char {
    cert.as_ref().map_or(ptr::null(), |c| c.json.as_ptr())
}

/// # Safety
/// `cert` must be NULL or a handle from `mvf_certify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mvf_certificate_free(cert: *mut MvfCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

#[no_mangle]
pub extern "C" fn mvf_cert_version() -> u32 {
    montesinos_vf::certificate::CERT_VERSION
}
