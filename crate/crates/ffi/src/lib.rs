//! C ABI over padic-dyn. Functions are opaque `PdFunction` handles; every
//! fallible call returns a `PdStatus` and leaves a message readable through
//! `pd_last_error_message` on the calling thread. Reports come back as
//! JSON strings owned by the caller and released with `pd_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use padic_dyn::arith::Prime;
use padic_dyn::cli::classify;
use padic_dyn::dynamics::{ergodic_ud, transitive_mod};
use padic_dyn::funcspace::{default_depth, mahler_coefficients, vdp_coefficients, PadicFunction, SeriesDocument};
use padic_dyn::Error;

/// Opaque handle to a function on Z_p known modulo p^depth.
pub struct PdFunction {
    inner: PadicFunction,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    NotPrime = 3,
    Parse = 4,
    Domain = 5,
    Precondition = 6,
    NotLipschitz = 7,
    NotUd1 = 8,
    Limit = 9,
    Invariant = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdBasis {
    Mahler = 0,
    VanDerPut = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PdStatus {
    match e {
        Error::NotPrime(_) => PdStatus::NotPrime,
        Error::Parse { .. } | Error::Json(_) => PdStatus::Parse,
        Error::Domain(_) | Error::Dimension(_) | Error::InsufficientLength { .. } | Error::NotExact { .. } => {
            PdStatus::Domain
        }
        Error::DepthExceeded { .. } | Error::Precondition(_) | Error::Io(_) => PdStatus::Precondition,
        Error::DepthLimit { .. } | Error::TableTooLarge { .. } => PdStatus::Limit,
        Error::NotLipschitz(_) => PdStatus::NotLipschitz,
        Error::NotUd1(_) => PdStatus::NotUd1,
        Error::Invariant(_) => PdStatus::Invariant,
    }
}

enum Failure {
    Status(PdStatus, String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PdStatus::Ok
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("panic inside padic-dyn");
            PdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(PdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Status(PdStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(f: *const PdFunction) -> Result<&'a PadicFunction, Failure> {
    f.as_ref().map(|h| &h.inner).ok_or_else(|| null("function handle"))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::Status(PdStatus::Invariant, "JSON contained a nul byte".into()))
}

fn boxed(f: PadicFunction) -> *mut PdFunction {
    Box::into_raw(Box::new(PdFunction { inner: f }))
}

/// Parses an integer polynomial such as "1+3*x+2*x^3". `depth` 0 selects
/// the default depth for `p`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_function_from_polynomial(
    text: *const c_char,
    p: u64,
    depth: u32,
    out: *mut *mut PdFunction,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        let prime = Prime::new(p)?;
        let depth = if depth == 0 { default_depth(prime) } else { depth };
        *out = boxed(PadicFunction::parse_polynomial(text, prime, depth)?);
        Ok(())
    })
}

/// Reads a JSON coefficient series or value table. `depth` 0 lets the
/// document decide.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn pd_function_from_json(json: *const c_char, depth: u32, out: *mut *mut PdFunction) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let doc: SeriesDocument = serde_json::from_str(read_str(json, "json")?).map_err(Error::from)?;
        *out = boxed(PadicFunction::from_document(&doc, (depth != 0).then_some(depth))?);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `f` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pd_function_free(f: *mut PdFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The prime of `f`, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_function_prime(f: *const PdFunction) -> u64 {
    f.as_ref().map_or(0, |h| h.inner.prime().get())
}

/// The depth of `f`, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_function_depth(f: *const PdFunction) -> u32 {
    f.as_ref().map_or(0, |h| h.inner.depth())
}

/// f(x) mod p^k for k ≤ depth.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pd_function_eval(f: *const PdFunction, x: u64, k: u32, out: *mut u64) -> PdStatus {
    guard(|| {
        let f = handle(f)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = f.eval_u64(x, k)?;
        Ok(())
    })
}

/// Whether f permutes Z/p^n in a single cycle.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pd_transitive_mod(f: *const PdFunction, n: u32, out: *mut bool) -> PdStatus {
    guard(|| {
        let f = handle(f)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = transitive_mod(f, n)?.transitive;
        Ok(())
    })
}

/// Ergodicity of a 1-Lipschitz, uniformly differentiable f. Fails with
/// `NotLipschitz` or `NotUd1` outside that class.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pd_ergodic(f: *const PdFunction, out: *mut bool) -> PdStatus {
    guard(|| {
        let f = handle(f)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ergodic_ud(f)?.ergodic;
        Ok(())
    })
}

/// Full verdict chain as JSON (the `classify` report). `exit_code` in the
/// report is 0 for ergodic, 1 for not ergodic, 2 when undecided.
///
/// # Safety
/// `f` must be a live handle and `out` writable; free the result with
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_classify_json(f: *const PdFunction, out: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let f = handle(f)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = classify(f, "<ffi>")?;
        *out = to_c_string(serde_json::to_string(&report).map_err(Error::from)?)?;
        Ok(())
    })
}

/// The first `count` coefficients mod p^k in the basis given by a
/// `PdBasis` value, as a series document accepted by `pd_function_from_json`.
///
/// # Safety
/// `f` must be a live handle and `out` writable; free the result with
/// `pd_string_free`.
#[no_mangle]
pub unsafe extern "C" fn pd_expand_json(
    f: *const PdFunction,
    basis: u32,
    count: u64,
    k: u32,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let f = handle(f)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let series = match basis {
            b if b == PdBasis::Mahler as u32 => mahler_coefficients(f, count, k)?,
            b if b == PdBasis::VanDerPut as u32 => vdp_coefficients(f, count, k)?,
            b => return Err(Failure::Status(PdStatus::Domain, format!("unknown basis {b}"))),
        };
        *out = to_c_string(serde_json::to_string(&SeriesDocument::from_series(&series)).map_err(Error::from)?)?;
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn pd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
