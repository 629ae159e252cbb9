//! C interface.
//!
//! Graphs are opaque handles created by [`gog_parse`] and released by [`gog_free`].
//! Reports come back as JSON strings owned by the caller, released by [`gog_string_free`].
//! Every call returns a [`GogStatus`]; on failure [`gog_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gogout::gog::GraphOfGroups;
use gogout::report::{load, render_json, run, Command};
use gogout::{Error, Limits};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GogStatus {
    Ok = 0,
    NullPointer = 1,
    Utf8 = 2,
    Parse = 3,
    Invalid = 4,
    Resource = 5,
    Internal = 6,
}

/// Opaque graph of finite groups together with the limits it was loaded under.
pub struct GogGraph {
    graph: GraphOfGroups,
    limits: Limits,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> GogStatus {
    match e {
        _ if e.is_resource() => GogStatus::Resource,
        Error::Parse { .. } => GogStatus::Parse,
        Error::InvalidGroup(_) | Error::InvalidGraph(_) | Error::MalformedPath(_) | Error::BaseMismatch(_) => {
            GogStatus::Invalid
        }
        _ => GogStatus::Internal,
    }
}

fn fail(e: Error) -> GogStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Parses a graph of groups in the text format.
///
/// `max_group_order` overrides the file's option when nonzero.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_parse(text: *const c_char, max_group_order: usize, out: *mut *mut GogGraph) -> GogStatus {
    clear_error();
    if text.is_null() || out.is_null() {
        set_error("null pointer");
        return GogStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let Ok(s) = CStr::from_ptr(text).to_str() else {
        set_error("input is not UTF-8");
        return GogStatus::Utf8;
    };
    let mut limits = Limits::default();
    if max_group_order > 0 {
        limits.max_group_order = max_group_order;
    }
    match load(s, &mut limits, max_group_order > 0) {
        Ok(graph) => {
            *out = Box::into_raw(Box::new(GogGraph { graph, limits }));
            GogStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `g` must come from [`gog_parse`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gog_free(g: *mut GogGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

unsafe fn report(g: *const GogGraph, command: Command, out: *mut *mut c_char) -> GogStatus {
    clear_error();
    if g.is_null() || out.is_null() {
        set_error("null pointer");
        return GogStatus::NullPointer;
    }
    *out = ptr::null_mut();
    let g = &*g;
    match run(command, &g.graph, &g.limits) {
        Ok(r) => match CString::new(render_json(&r)) {
            Ok(c) => {
                *out = c.into_raw();
                GogStatus::Ok
            }
            Err(_) => {
                set_error("report contains a NUL byte");
                GogStatus::Internal
            }
        },
        Err(e) => fail(e),
    }
}

/// Decides whether Out(G) is finite and writes the JSON report to `out`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_decide(g: *const GogGraph, out: *mut *mut c_char) -> GogStatus {
    report(g, Command::Decide, out)
}

/// Writes finite presentability evidence as JSON to `out`.
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gog_certify_fp(g: *const GogGraph, out: *mut *mut c_char) -> GogStatus {
    report(g, Command::CertifyFp, out)
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn gog_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null.
///
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gog_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
