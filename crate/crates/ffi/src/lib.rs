//! C ABI for `bridge-rect`.
//!
//! Systems cross the boundary as opaque `BrSystem` handles created by
//! `br_system_parse` or `br_system_builtin` and released with
//! `br_system_free`. Every fallible function returns a `BrStatus`; on failure
//! `br_last_error_message` describes the most recent error on the calling
//! thread. Strings returned to the caller are freed with `br_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bridge_rect::arrangement::intersection_matrix;
use bridge_rect::catalog;
use bridge_rect::criteria::{certify_no_rc_partner, find_waves, normal_form_report, rectangle_report};
use bridge_rect::format::{parse_system, to_text, FormatError};
use bridge_rect::sphere::{are_isotopic, ArcSystem};

/// Opaque handle to a validated arc system.
pub struct BrSystem(ArcSystem);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidSystem = 4,
    UnknownBuiltin = 5,
    IsotopicInput = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into().replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Runs `f`, converting panics into `BrStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (BrStatus, String)>) -> BrStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BrStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            BrStatus::Panic
        }
    }
}

fn null(what: &str) -> (BrStatus, String) {
    (BrStatus::NullPointer, format!("`{what}` is null"))
}

unsafe fn system<'a>(p: *const BrSystem, what: &str) -> Result<&'a ArcSystem, (BrStatus, String)> {
    // SAFETY: the caller passes a handle from this library or null.
    unsafe { p.as_ref() }.map(|s| &s.0).ok_or_else(|| null(what))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, (BrStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and NUL-terminated per the documented contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| (BrStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), (BrStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null, and the caller guarantees it points to writable storage.
    unsafe { out.write(value) };
    Ok(())
}

/// Message for the last error on this thread, or NULL. Valid until the next
/// call into this library on the same thread.
#[no_mangle]
pub extern "C" fn br_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and validates a system in the text format.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_system_parse(text: *const c_char, out: *mut *mut BrSystem) -> BrStatus {
    guard(|| {
        let text = unsafe { string(text, "text") }?;
        let sys = parse_system(text).map_err(|e| match e {
            FormatError::Invalid(v) => (BrStatus::InvalidSystem, v.to_string()),
            other => (BrStatus::ParseError, other.to_string()),
        })?;
        store(out, Box::into_raw(Box::new(BrSystem(sys))), "out")
    })
}

/// Loads a built-in fixture (`@epsilon`, `@delta85`, `@rc-positive-A`,
/// `@rc-positive-B`; the `@` is optional).
///
/// # Safety
/// `name` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_system_builtin(name: *const c_char, out: *mut *mut BrSystem) -> BrStatus {
    guard(|| {
        let name = unsafe { string(name, "name") }?;
        let f = catalog::fixture(name).ok_or_else(|| (BrStatus::UnknownBuiltin, format!("unknown built-in `{name}`")))?;
        store(out, Box::into_raw(Box::new(BrSystem(f.system))), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `sys` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn br_system_free(sys: *mut BrSystem) {
    if !sys.is_null() {
        // SAFETY: created by Box::into_raw in this library.
        drop(unsafe { Box::from_raw(sys) });
    }
}

/// Serializes a system; free the result with `br_string_free`.
///
/// # Safety
/// `sys` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_system_to_text(sys: *const BrSystem, out: *mut *mut c_char) -> BrStatus {
    guard(|| {
        let sys = unsafe { system(sys, "sys") }?;
        let text = CString::new(to_text(sys)).expect("format has no NULs");
        store(out, text.into_raw(), "out")
    })
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn br_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: created by CString::into_raw in this library.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_are_isotopic(a: *const BrSystem, b: *const BrSystem, out: *mut bool) -> BrStatus {
    guard(|| {
        let (a, b) = unsafe { (system(a, "a")?, system(b, "b")?) };
        store(out, are_isotopic(a, b), "out")
    })
}

/// Minimal intersection numbers, row-major: `out[3*i+j] = |a_(i+1) ∩ b_(j+1)|`.
///
/// # Safety
/// Handles must be live; `out` must hold 9 values.
#[no_mangle]
pub unsafe extern "C" fn br_intersection_matrix(a: *const BrSystem, b: *const BrSystem, out: *mut u32) -> BrStatus {
    guard(|| {
        let (a, b) = unsafe { (system(a, "a")?, system(b, "b")?) };
        if out.is_null() {
            return Err(null("out"));
        }
        let m = intersection_matrix(a, b);
        for (k, v) in m.iter().flatten().enumerate() {
            // SAFETY: the caller provides room for 9 values.
            unsafe { out.add(k).write(*v) };
        }
        Ok(())
    })
}

/// Rectangle condition. `realized_mask` gets bit `3*i+j` for each realized
/// tuple, with `i` and `j` indexing the pairs {1,2}, {1,3}, {2,3} of `a` and
/// `b`. Isotopic inputs return `BR_STATUS_ISOTOPIC_INPUT`.
///
/// # Safety
/// Handles must be live; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_rectangle_condition(
    a: *const BrSystem,
    b: *const BrSystem,
    holds: *mut bool,
    realized_mask: *mut u32,
) -> BrStatus {
    guard(|| {
        let (a, b) = unsafe { (system(a, "a")?, system(b, "b")?) };
        let r = rectangle_report(a, b);
        if let Some(d) = r.diagnostic {
            return Err((BrStatus::IsotopicInput, d));
        }
        store(holds, r.holds, "holds")?;
        store(realized_mask, r.mask(), "realized_mask")
    })
}

/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_normal_form(a: *const BrSystem, b: *const BrSystem, out: *mut bool) -> BrStatus {
    guard(|| {
        let (a, b) = unsafe { (system(a, "a")?, system(b, "b")?) };
        store(out, normal_form_report(a, b).holds, "out")
    })
}

/// Number of waves of `target` with respect to `reference`.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_wave_count(reference: *const BrSystem, target: *const BrSystem, out: *mut usize) -> BrStatus {
    guard(|| {
        let (r, t) = unsafe { (system(reference, "reference")?, system(target, "target")?) };
        store(out, find_waves(r, t).len(), "out")
    })
}

/// Certificate that `b` has no rectangle-condition partner carrying `gamma`:
/// on success `*found` tells whether one exists, and if so arc
/// `*witness_arc` (1-based) of `gamma` misses the pair `{*pair_i, *pair_j}`
/// of `b`. A `gamma` arc isotopic to an arc of `b` returns
/// `BR_STATUS_ISOTOPIC_INPUT`.
///
/// # Safety
/// Handles must be live; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn br_certify(
    gamma: *const BrSystem,
    b: *const BrSystem,
    found: *mut bool,
    witness_arc: *mut u32,
    pair_i: *mut u32,
    pair_j: *mut u32,
) -> BrStatus {
    guard(|| {
        let (g, b) = unsafe { (system(gamma, "gamma")?, system(b, "b")?) };
        let cert = certify_no_rc_partner(g, b).map_err(|e| (BrStatus::IsotopicInput, e.to_string()))?;
        store(found, cert.is_some(), "found")?;
        if let Some(c) = cert {
            store(witness_arc, c.witness_arc as u32 + 1, "witness_arc")?;
            store(pair_i, c.missing_pair.0 as u32 + 1, "pair_i")?;
            store(pair_j, c.missing_pair.1 as u32 + 1, "pair_j")?;
        }
        Ok(())
    })
}
