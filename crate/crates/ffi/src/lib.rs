//! C interface to `cxone`.
//!
//! Objects are handed out as opaque pointers and released with the matching
//! `*_free`. Every call returns a [`CxStatus`]; on failure a description is kept
//! per thread and can be read with [`cx_last_error_message`]. Strings returned
//! through `char **` are owned by the caller and released with [`cx_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cxone::cli::{self, CliError, Command, Options};
use cxone::coadjoint::RootSystemOrbit;
use cxone::rep::SubtorusRep;

/// Status codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    MalformedInput = 3,
    Precondition = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// Subgroup of a torus acting linearly on ℂⁿ.
pub struct CxRep(SubtorusRep);

/// Torus fixed points of a coadjoint orbit of type B or D.
pub struct CxOrbit(RootSystemOrbit);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: CxStatus, msg: &str) -> CxStatus {
    set_error(msg);
    status
}

fn from_cli(e: CliError) -> CxStatus {
    let status = match e {
        CliError::Malformed(_) => CxStatus::MalformedInput,
        CliError::Domain { .. } => CxStatus::Precondition,
    };
    fail(status, &format!("{}: {}", e.code(), e))
}

fn guard(f: impl FnOnce() -> CxStatus) -> CxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CxStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(CxStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, CxStatus> {
    if p.is_null() {
        return Err(fail(CxStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(CxStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

fn export_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(CxStatus::NullPointer, concat!("null pointer: ", stringify!($p)));
        })+
    };
}

/// Message describing the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cx_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"n": .., "presentation": "image"|"kernel", "matrix": [[..]]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_from_json(json: *const c_char, out: *mut *mut CxRep) -> CxStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let text = try_status!(read_str(json));
        match cli::rep_from_json(text) {
            Ok(rep) => {
                *out = Box::into_raw(Box::new(CxRep(rep)));
                CxStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// # Safety
/// `rep` must come from [`cx_rep_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_free(rep: *mut CxRep) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// # Safety
/// `rep` must be a live handle and `n` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_n(rep: *const CxRep, n: *mut usize) -> CxStatus {
    guard(|| {
        non_null!(rep, n);
        *n = (*rep).0.n();
        CxStatus::Ok
    })
}

/// Dimension of H.
///
/// # Safety
/// `rep` must be a live handle and `h` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_h(rep: *const CxRep, h: *mut usize) -> CxStatus {
    guard(|| {
        non_null!(rep, h);
        *h = (*rep).0.h();
        CxStatus::Ok
    })
}

/// # Safety
/// `rep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_is_onto(rep: *const CxRep, out: *mut bool) -> CxStatus {
    guard(|| {
        non_null!(rep, out);
        *out = (*rep).0.is_onto();
        CxStatus::Ok
    })
}

/// # Safety
/// `rep` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_is_proper(rep: *const CxRep, out: *mut bool) -> CxStatus {
    guard(|| {
        non_null!(rep, out);
        *out = (*rep).0.is_proper();
        CxStatus::Ok
    })
}

/// Writes the exponents ξ into `buf`. `len` receives n; if `cap < n` nothing
/// is written and `CX_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `rep` must be a live handle, `len` writable, and `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_defining_polynomial(
    rep: *const CxRep,
    buf: *mut i64,
    cap: usize,
    len: *mut usize,
) -> CxStatus {
    guard(|| {
        non_null!(rep, len);
        let p = match (*rep).0.defining_polynomial() {
            Ok(p) => p,
            Err(e) => return from_cli(e.into()),
        };
        *len = p.exponents.len();
        if cap < p.exponents.len() {
            return fail(CxStatus::BufferTooSmall, "buffer too small for exponents");
        }
        if !p.exponents.is_empty() {
            non_null!(buf);
        }
        for (i, e) in p.exponents.iter().enumerate() {
            let Ok(v) = i64::try_from(e) else {
                return fail(CxStatus::Precondition, "exponent does not fit in 64 bits");
            };
            *buf.add(i) = v;
        }
        CxStatus::Ok
    })
}

/// Whether the orbit through points with nonzero coordinates exactly at
/// `support[0..len]` (0-based) is exceptional.
///
/// # Safety
/// `rep` must be a live handle, `support` valid for `len` reads, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_rep_is_exceptional_orbit(
    rep: *const CxRep,
    support: *const usize,
    len: usize,
    out: *mut bool,
) -> CxStatus {
    guard(|| {
        non_null!(rep, out);
        let s: &[usize] = if len == 0 {
            &[]
        } else {
            non_null!(support);
            std::slice::from_raw_parts(support, len)
        };
        match (*rep).0.is_exceptional_orbit(s) {
            Ok(b) => {
                *out = b;
                CxStatus::Ok
            }
            Err(e) => from_cli(e.into()),
        }
    })
}

/// Parses `{"family": "B"|"D", "rank": k, "base_point": ["p/q", ..]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cx_orbit_from_json(json: *const c_char, out: *mut *mut CxOrbit) -> CxStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let text = try_status!(read_str(json));
        match cli::orbit_from_json(text) {
            Ok(o) => {
                *out = Box::into_raw(Box::new(CxOrbit(o)));
                CxStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// # Safety
/// `orbit` must come from [`cx_orbit_from_json`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cx_orbit_free(orbit: *mut CxOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// Number of torus fixed points.
///
/// # Safety
/// `orbit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_orbit_fixed_point_count(orbit: *const CxOrbit, out: *mut usize) -> CxStatus {
    guard(|| {
        non_null!(orbit, out);
        *out = (*orbit).0.fixed_points.len();
        CxStatus::Ok
    })
}

/// Packing report as JSON, same layout as the `packing-check` command.
///
/// # Safety
/// `orbit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_orbit_packing_report(orbit: *const CxOrbit, out: *mut *mut c_char) -> CxStatus {
    guard(|| {
        non_null!(orbit, out);
        *out = ptr::null_mut();
        match cli::render_packing(&(*orbit).0) {
            Ok(s) => {
                *out = export_string(s);
                CxStatus::Ok
            }
            Err(e) => from_cli(e),
        }
    })
}

/// Runs a CLI subcommand (e.g. `"defining-poly"`) on a JSON document.
/// `samples` of 0 and `tol` ≤ 0 select the defaults. On success `out` holds the
/// report; on a malformed-input or precondition failure it holds the JSON error object.
///
/// # Safety
/// String arguments must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cx_run_json(
    subcommand: *const c_char,
    input: *const c_char,
    seed: u64,
    samples: usize,
    tol: f64,
    out: *mut *mut c_char,
) -> CxStatus {
    guard(|| {
        non_null!(out);
        *out = ptr::null_mut();
        let name = try_status!(read_str(subcommand));
        let text = try_status!(read_str(input));
        let Some(cmd) = Command::from_name(name) else {
            return fail(CxStatus::MalformedInput, &format!("unknown subcommand {name:?}"));
        };
        let opts = Options {
            seed,
            samples: (samples > 0).then_some(samples),
            tol: (tol > 0.0).then_some(tol),
        };
        match cli::execute(cmd, text, &opts) {
            Ok(r) => {
                *out = export_string(r.body);
                CxStatus::Ok
            }
            Err(e) => {
                *out = export_string(cxone::json::to_pretty(&e.to_json()));
                from_cli(e)
            }
        }
    })
}
