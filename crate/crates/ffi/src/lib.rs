//! C ABI for `spmul`.
//!
//! Polynomials and exponent sets cross the boundary as opaque handles that
//! are created by `*_parse` or by an operation and released with `*_free`.
//! Text uses the same formats as the command-line tool. Every fallible
//! function returns a `SpmulStatus`; on failure `spmul_last_error` describes
//! the problem. Strings returned to the caller are released with
//! `spmul_string_free`.

use num_bigint::BigUint;
use spmul::{Error, ExponentSet, RandomSource, Ring, SparsePoly};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpmulStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// A randomized stage failed; retrying with another seed may succeed.
    Fail = 4,
    Internal = 5,
}

/// Opaque sparse polynomial.
pub struct SpmulPoly {
    inner: SparsePoly,
}

/// Opaque sorted set of integers.
pub struct SpmulSet {
    inner: ExponentSet,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SpmulStatus {
    match e {
        Error::Fail(_) => SpmulStatus::Fail,
        Error::Parse { .. } => SpmulStatus::Parse,
        Error::Io(_) => SpmulStatus::Internal,
        _ => SpmulStatus::InvalidArgument,
    }
}

/// Runs `body`, recording any error or panic.
fn guard(body: impl FnOnce() -> Result<(), (SpmulStatus, String)>) -> SpmulStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SpmulStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpmulStatus::Internal
        }
    }
}

fn lib(e: Error) -> (SpmulStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (SpmulStatus, String) {
    (SpmulStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (SpmulStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|_| (SpmulStatus::Parse, "text is not UTF-8".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (SpmulStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), (SpmulStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), (SpmulStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).map_err(|_| (SpmulStatus::Internal, "interior NUL".into()))?.into_raw();
    Ok(())
}

/// Message for the most recent failure on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn spmul_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn spmul_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a polynomial in `sp 1 <nvars>` text form.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_poly_parse(text_in: *const c_char, out: *mut *mut SpmulPoly) -> SpmulStatus {
    guard(|| {
        let f = SparsePoly::parse(text(text_in)?).map_err(lib)?;
        put(out, SpmulPoly { inner: f })
    })
}

/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_poly_to_string(p: *const SpmulPoly, out: *mut *mut c_char) -> SpmulStatus {
    guard(|| put_string(out, handle(p)?.inner.to_text()))
}

/// Number of terms, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spmul_poly_terms(p: *const SpmulPoly) -> usize {
    p.as_ref().map_or(0, |p| p.inner.sparsity())
}

/// # Safety
/// `p` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn spmul_poly_free(p: *mut SpmulPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

unsafe fn multiply(
    f: *const SpmulPoly,
    g: *const SpmulPoly,
    ring: Ring,
    mu: f64,
    seed: u64,
    out: *mut *mut SpmulPoly,
) -> SpmulStatus {
    guard(|| {
        let (f, g) = (handle(f)?, handle(g)?);
        let mut rng = RandomSource::from_seed(seed);
        let h = spmul::sparse_mult_ring(&f.inner, &g.inner, &ring, mu, &mut rng).map_err(lib)?;
        put(out, SpmulPoly { inner: h })
    })
}

/// Product over the integers, correct with probability at least `1 - mu`.
///
/// # Safety
/// `f`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_mul(f: *const SpmulPoly, g: *const SpmulPoly, mu: f64, seed: u64, out: *mut *mut SpmulPoly) -> SpmulStatus {
    multiply(f, g, Ring::Integers, mu, seed, out)
}

/// Product modulo the decimal integer `modulus`, coefficients centered.
///
/// # Safety
/// `f`, `g` must be live handles, `modulus` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_mul_mod(
    f: *const SpmulPoly,
    g: *const SpmulPoly,
    modulus: *const c_char,
    mu: f64,
    seed: u64,
    out: *mut *mut SpmulPoly,
) -> SpmulStatus {
    let m = match text(modulus) {
        Ok(s) => match s.trim().parse::<BigUint>() {
            Ok(m) => m,
            Err(_) => return guard(|| Err((SpmulStatus::Parse, format!("bad modulus {s:?}")))),
        },
        Err(e) => return guard(|| Err(e)),
    };
    multiply(f, g, Ring::Modular(m), mu, seed, out)
}

/// Product by the quadratic reference algorithm.
///
/// # Safety
/// `f`, `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_naive_mul(f: *const SpmulPoly, g: *const SpmulPoly, out: *mut *mut SpmulPoly) -> SpmulStatus {
    guard(|| {
        let h = spmul::oracles::naive_mul(&handle(f)?.inner, &handle(g)?.inner).map_err(lib)?;
        put(out, SpmulPoly { inner: h })
    })
}

/// Parses a set, one decimal integer per line.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_set_parse(text_in: *const c_char, out: *mut *mut SpmulSet) -> SpmulStatus {
    guard(|| {
        let s = ExponentSet::parse(text(text_in)?).map_err(lib)?;
        put(out, SpmulSet { inner: s })
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_set_to_string(s: *const SpmulSet, out: *mut *mut c_char) -> SpmulStatus {
    guard(|| put_string(out, handle(s)?.inner.to_text()))
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn spmul_set_len(s: *const SpmulSet) -> usize {
    s.as_ref().map_or(0, |s| s.inner.len())
}

/// # Safety
/// `s` must be null or a handle from this library, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn spmul_set_free(s: *mut SpmulSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `{a + b}`, correct with probability at least `1 - mu`.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spmul_sumset(a: *const SpmulSet, b: *const SpmulSet, mu: f64, seed: u64, out: *mut *mut SpmulSet) -> SpmulStatus {
    guard(|| {
        let mut rng = RandomSource::from_seed(seed);
        let s = spmul::sumset(&handle(a)?.inner, &handle(b)?.inner, mu, &mut rng).map_err(lib)?;
        put(out, SpmulSet { inner: s })
    })
}
