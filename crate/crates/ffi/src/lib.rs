//! C ABI over `oscomp`.
//!
//! Models are opaque handles. Elements cross the boundary as JSON text
//! (`7`, `[1,2]`, `[[1],[2,0]]`). Every fallible call returns an
//! [`OscompStatus`]; on failure `oscomp_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use oscomp::comparison::{n_comparison, stably_dominated};
use oscomp::semigroup::Frobenius;
use oscomp::{Element, Error, SemigroupModel};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OscompStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    OutOfBound = 5,
    PreconditionViolated = 6,
    UnknownAtBound = 7,
    Overflow = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OscompFrobeniusKind {
    /// `value` is the largest gap.
    Number = 0,
    /// Infinitely many gaps; `value` is the gcd of the generators.
    InfiniteGaps = 1,
    /// No gaps; `value` is 0.
    NoGaps = 2,
}

/// Opaque model handle.
pub struct OscompModel {
    inner: SemigroupModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> OscompStatus {
    match err {
        Error::Parse { .. } => OscompStatus::Parse,
        Error::ValueOutOfBound { .. } | Error::BoundTooSmall(_) => OscompStatus::OutOfBound,
        Error::PreconditionViolated(_)
        | Error::NotIncreasing(_)
        | Error::NoFullElement
        | Error::NoFullPair
        | Error::ZeroNormalizer => OscompStatus::PreconditionViolated,
        Error::UnknownAtBound(_)
        | Error::UndecidableAtBound(_)
        | Error::HorizonExceeded(_)
        | Error::OracleFailure => OscompStatus::UnknownAtBound,
        Error::Overflow => OscompStatus::Overflow,
        _ => OscompStatus::InvalidInput,
    }
}

struct Failure(OscompStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OscompStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OscompStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            OscompStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(
            OscompStatus::NullPointer,
            format!("{what} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(OscompStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn model<'a>(p: *const OscompModel) -> Result<&'a SemigroupModel, Failure> {
    p.as_ref()
        .map(|m| &m.inner)
        .ok_or_else(|| Failure(OscompStatus::NullPointer, "model is null".into()))
}

unsafe fn element(m: &SemigroupModel, p: *const c_char, what: &str) -> Result<Element, Failure> {
    let t = text(p, what)?;
    let v: serde_json::Value = serde_json::from_str(t).map_err(Error::from)?;
    Ok(m.parse_element(&v)?)
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(OscompStatus::NullPointer, format!("{what} is null")))
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn oscomp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a model from its JSON description.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_model` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn oscomp_model_from_json(
    json: *const c_char,
    out_model: *mut *mut OscompModel,
) -> OscompStatus {
    guard(|| {
        let slot = out(out_model, "out_model")?;
        *slot = ptr::null_mut();
        let inner = SemigroupModel::from_json_str(text(json, "json")?)?;
        *slot = Box::into_raw(Box::new(OscompModel { inner }));
        Ok(())
    })
}

/// # Safety
/// `model` must come from `oscomp_model_from_json` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn oscomp_model_free(model: *mut OscompModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// Pointers must be valid; `element` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn oscomp_member(
    model_ptr: *const OscompModel,
    element_json: *const c_char,
    out_member: *mut bool,
) -> OscompStatus {
    guard(|| {
        let m = model(model_ptr)?;
        let e = element(m, element_json, "element")?;
        *out(out_member, "out_member")? = m.member(&e)?.member;
        Ok(())
    })
}

/// Frobenius number of a numerical model.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn oscomp_frobenius(
    model_ptr: *const OscompModel,
    out_kind: *mut OscompFrobeniusKind,
    out_value: *mut u64,
) -> OscompStatus {
    guard(|| {
        let m = model(model_ptr)?;
        let (kind, value) = match m.frobenius()? {
            Frobenius::Number { value } => (OscompFrobeniusKind::Number, value),
            Frobenius::InfiniteGaps { gcd } => (OscompFrobeniusKind::InfiniteGaps, gcd),
            Frobenius::NoGaps => (OscompFrobeniusKind::NoGaps, 0),
        };
        *out(out_kind, "out_kind")? = kind;
        *out(out_value, "out_value")? = value;
        Ok(())
    })
}

/// `x <= y` in the model's order.
///
/// # Safety
/// Pointers must be valid; element strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn oscomp_leq(
    model_ptr: *const OscompModel,
    x_json: *const c_char,
    y_json: *const c_char,
    out_leq: *mut bool,
) -> OscompStatus {
    guard(|| {
        let m = model(model_ptr)?;
        let x = element(m, x_json, "x")?;
        let y = element(m, y_json, "y")?;
        *out(out_leq, "out_leq")? = m.leq(&x, &y)?.is_some();
        Ok(())
    })
}

/// Least `k <= k_max` with `(k+1)x <= ky`. `out_found` is false when none
/// exists within `k_max`.
///
/// # Safety
/// Pointers must be valid; element strings nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn oscomp_stably_dominated(
    model_ptr: *const OscompModel,
    x_json: *const c_char,
    y_json: *const c_char,
    k_max: u64,
    out_found: *mut bool,
    out_k: *mut u64,
) -> OscompStatus {
    guard(|| {
        let m = model(model_ptr)?;
        let x = element(m, x_json, "x")?;
        let y = element(m, y_json, "y")?;
        let cert = stably_dominated(m, &x, &y, k_max)?;
        *out(out_found, "out_found")? = cert.is_some();
        *out(out_k, "out_k")? = cert.map_or(0, |c| c.k);
        Ok(())
    })
}

/// Bounded n-comparison verdict as JSON. Free the string with
/// `oscomp_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn oscomp_n_comparison_json(
    model_ptr: *const OscompModel,
    n: u64,
    bound: u64,
    weak: bool,
    out_json: *mut *mut c_char,
) -> OscompStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        *slot = ptr::null_mut();
        let m = model(model_ptr)?;
        let v = n_comparison(m, n, bound, weak)?;
        let s = serde_json::to_string(&v).map_err(Error::from)?;
        *slot = CString::new(s).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn oscomp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
