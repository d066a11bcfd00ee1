//! C interface to `geomatch`.
//!
//! Objects are opaque handles owned by the caller and released with the
//! matching `*_free` function. Every fallible call returns a [`GmStatus`];
//! on failure, [`gm_last_error_message`] describes the error on the calling
//! thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use geomatch::io::{instance_from_str, SolutionFile};
use geomatch::model::{Instance, Point};
use geomatch::solve::{solve, Algo, Solution};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    BufferTooSmall = 3,
    Internal = 4,
}

/// A point-set instance.
pub struct GmInstance(Instance);

/// A solved cover.
pub struct GmSolution(Solution);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guard(f: impl FnOnce() -> Result<(), (GmStatus, String)>) -> GmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GmStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            GmStatus::Internal
        }
    }
}

fn null(what: &str) -> (GmStatus, String) {
    (GmStatus::NullPointer, format!("{what} is null"))
}

fn invalid(e: impl ToString) -> (GmStatus, String) {
    (GmStatus::InvalidInput, e.to_string())
}

unsafe fn points(xy: *const f64, count: usize, what: &str) -> Result<Vec<Point>, (GmStatus, String)> {
    if count == 0 {
        return Ok(Vec::new());
    }
    if xy.is_null() {
        return Err(null(what));
    }
    let flat = std::slice::from_raw_parts(xy, 2 * count);
    Ok(flat.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (GmStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call on the same thread.
#[no_mangle]
pub extern "C" fn gm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds an instance from interleaved `x, y` coordinates: `s_xy` holds
/// `2 * ns` values and `t_xy` holds `2 * nt`.
///
/// # Safety
/// The arrays must be readable for the given lengths and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_instance_new(
    s_xy: *const f64,
    ns: usize,
    t_xy: *const f64,
    nt: usize,
    out: *mut *mut GmInstance,
) -> GmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = points(s_xy, ns, "s_xy")?;
        let t = points(t_xy, nt, "t_xy")?;
        let inst = Instance::new(s, t).map_err(invalid)?;
        *out = Box::into_raw(Box::new(GmInstance(inst)));
        Ok(())
    })
}

/// Parses instance JSON or the whitespace text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_instance_from_json(text: *const c_char, out: *mut *mut GmInstance) -> GmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = instance_from_str(c_str(text, "text")?).map_err(invalid)?;
        *out = Box::into_raw(Box::new(GmInstance(inst)));
        Ok(())
    })
}

/// # Safety
/// `inst` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gm_instance_free(inst: *mut GmInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Solves with `algo` (`"exact"`, `"greedy2"` or `"gt"`). `eps` is used by
/// `gt` only; pass NaN for the other algorithms.
///
/// # Safety
/// `inst` must be a live handle, `algo` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gm_solve(
    inst: *const GmInstance,
    algo: *const c_char,
    eps: f64,
    out: *mut *mut GmSolution,
) -> GmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inst = inst.as_ref().ok_or_else(|| null("inst"))?;
        let algo: Algo = c_str(algo, "algo")?.parse().map_err(invalid)?;
        let eps = (!eps.is_nan()).then_some(eps);
        let sol = solve(&inst.0, algo, eps).map_err(invalid)?;
        *out = Box::into_raw(Box::new(GmSolution(sol)));
        Ok(())
    })
}

/// Cost of the cover, or NaN for a null handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_solution_cost(sol: *const GmSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.0.cost)
}

/// Number of pairs in the cover, 0 for a null handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_solution_pair_count(sol: *const GmSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.0.pairs.len())
}

/// Writes the pairs as `s0, t0, s1, t1, ...` into `buf`, which holds `cap`
/// values; `cap` must be at least twice the pair count.
///
/// # Safety
/// `sol` must be a live handle and `buf` writable for `cap` values.
#[no_mangle]
pub unsafe extern "C" fn gm_solution_pairs(sol: *const GmSolution, buf: *mut usize, cap: usize) -> GmStatus {
    guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let need = 2 * sol.0.pairs.len();
        if cap < need {
            return Err((GmStatus::BufferTooSmall, format!("need {need} slots, got {cap}")));
        }
        if need == 0 {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let out = std::slice::from_raw_parts_mut(buf, need);
        for (i, (s, t)) in sol.0.pairs.iter().enumerate() {
            out[2 * i] = s;
            out[2 * i + 1] = t;
        }
        Ok(())
    })
}

/// Solution JSON; release with [`gm_string_free`]. Null on failure.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gm_solution_to_json(sol: *const GmSolution) -> *mut c_char {
    let mut text = None;
    let status = guard(|| {
        let sol = sol.as_ref().ok_or_else(|| null("sol"))?;
        let file = SolutionFile::new(&sol.0.pairs, sol.0.cost, &sol.0.algo.to_string(), None);
        text = Some(CString::new(file.to_json()).map_err(invalid)?);
        Ok(())
    });
    match (status, text) {
        (GmStatus::Ok, Some(s)) => s.into_raw(),
        _ => ptr::null_mut(),
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `sol` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gm_solution_free(sol: *mut GmSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}
