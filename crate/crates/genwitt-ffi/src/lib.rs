//! C ABI over the genwitt library.
//!
//! Conventions: handles are opaque and freed with their matching
//! `*_free` function; strings returned through out-parameters are
//! NUL-terminated UTF-8 owned by the caller and released with
//! [`gw_string_free`]; every fallible call returns a [`GwStatus`] and
//! leaves a thread-local message readable via [`gw_last_error_message`]
//! on failure. Out-parameters are written only on `GW_STATUS_OK` unless
//! documented otherwise.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::str::FromStr;

use genwitt::algebra::{AlgebraConfig, Element};
use genwitt::derivations;
use genwitt::error::Error;
use genwitt::ideals::{self, AdDiagOutcome, IndexBox};
use genwitt::rational::Rational;
use genwitt::structure;
use genwitt::text;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GwStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    MathFailure = 5,
    InternalError = 6,
}

/// Opaque algebra configuration: rank plus slopes.
pub struct GwConfig {
    inner: AlgebraConfig,
}

/// Opaque element: a canonical rational combination of basis elements.
pub struct GwElement {
    inner: Element,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into().replace('\0', "?");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).expect("NULs replaced");
    });
}

fn status_of(err: &Error) -> GwStatus {
    match err {
        Error::Parse(_) => GwStatus::ParseError,
        Error::SearchExhausted { .. } | Error::NotADerivation(_) => GwStatus::MathFailure,
        _ => GwStatus::InvalidInput,
    }
}

fn fail(err: Error) -> GwStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> GwStatus) -> GwStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        GwStatus::InternalError
    })
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, GwStatus> {
    if ptr.is_null() {
        set_error("null string argument");
        return Err(GwStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        GwStatus::InvalidUtf8
    })
}

fn give_string(text: String, out: *mut *mut c_char) -> GwStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            GwStatus::Ok
        }
        Err(_) => {
            set_error("formatted text contained a NUL byte");
            GwStatus::InternalError
        }
    }
}

macro_rules! nonnull {
    ($ptr:expr) => {
        if $ptr.is_null() {
            set_error(concat!("null argument: ", stringify!($ptr)));
            return GwStatus::NullArgument;
        }
    };
}

/// Message for the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a configuration of rank `n`. `slopes` is either null (all
/// slopes one) or a comma-separated list of `n` nonzero rationals such
/// as `"1,2/3,-5"`.
///
/// # Safety
/// `slopes` must be null or a valid NUL-terminated string; `out` must be
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_config_new(
    n: usize,
    slopes: *const c_char,
    out: *mut *mut GwConfig,
) -> GwStatus {
    guard(|| {
        nonnull!(out);
        unsafe { *out = ptr::null_mut() };
        let parsed = if slopes.is_null() {
            vec![Rational::from_integer(1.into()); n]
        } else {
            let text = match unsafe { read_str(slopes) } {
                Ok(t) => t,
                Err(status) => return status,
            };
            let mut list = Vec::new();
            for part in text.split(',') {
                match Rational::from_str(part.trim()) {
                    Ok(r) => list.push(r),
                    Err(_) => {
                        set_error(format!("invalid slope '{}'", part.trim()));
                        return GwStatus::ParseError;
                    }
                }
            }
            if list.len() != n {
                set_error(format!("expected {n} slopes, found {}", list.len()));
                return GwStatus::InvalidInput;
            }
            list
        };
        match AlgebraConfig::new(parsed) {
            Ok(cfg) => {
                unsafe { *out = Box::into_raw(Box::new(GwConfig { inner: cfg })) };
                GwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `cfg` must be null or a pointer from [`gw_config_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gw_config_free(cfg: *mut GwConfig) {
    if !cfg.is_null() {
        drop(unsafe { Box::from_raw(cfg) });
    }
}

/// Rank of the configuration; 0 if `cfg` is null.
///
/// # Safety
/// `cfg` must be null or a valid configuration handle.
#[no_mangle]
pub unsafe extern "C" fn gw_config_rank(cfg: *const GwConfig) -> usize {
    if cfg.is_null() {
        return 0;
    }
    unsafe { &*cfg }.inner.n()
}

/// Parses an element in the textual grammar, e.g.
/// `"3/2*(1,0|2,-1)_1 - (0,0|0,0)_2"`.
///
/// # Safety
/// All pointers must be valid; `text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn gw_element_parse(
    cfg: *const GwConfig,
    text: *const c_char,
    out: *mut *mut GwElement,
) -> GwStatus {
    guard(|| {
        nonnull!(cfg);
        nonnull!(out);
        unsafe { *out = ptr::null_mut() };
        let text = match unsafe { read_str(text) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let n = unsafe { &*cfg }.inner.n();
        match text::parse_element(text, n) {
            Ok(element) => {
                unsafe { *out = Box::into_raw(Box::new(GwElement { inner: element })) };
                GwStatus::Ok
            }
            Err(e) => fail(e.into()),
        }
    })
}

/// Formats an element canonically (terms lex-descending).
///
/// # Safety
/// `el` must be a valid element handle; `out` a valid pointer. Free the
/// returned string with [`gw_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gw_element_format(
    el: *const GwElement,
    out: *mut *mut c_char,
) -> GwStatus {
    guard(|| {
        nonnull!(el);
        nonnull!(out);
        give_string(unsafe { &*el }.inner.to_string(), out)
    })
}

/// # Safety
/// `el` must be null or an element handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gw_element_free(el: *mut GwElement) {
    if !el.is_null() {
        drop(unsafe { Box::from_raw(el) });
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Whether the element is zero.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gw_element_is_zero(
    el: *const GwElement,
    out: *mut bool,
) -> GwStatus {
    guard(|| {
        nonnull!(el);
        nonnull!(out);
        unsafe { *out = (*el).inner.is_zero() };
        GwStatus::Ok
    })
}

/// Bracket `[x, y]`.
///
/// # Safety
/// Pointers must be valid handles from this library.
#[no_mangle]
pub unsafe extern "C" fn gw_bracket(
    cfg: *const GwConfig,
    x: *const GwElement,
    y: *const GwElement,
    out: *mut *mut GwElement,
) -> GwStatus {
    guard(|| {
        nonnull!(cfg);
        nonnull!(x);
        nonnull!(y);
        nonnull!(out);
        unsafe { *out = ptr::null_mut() };
        let cfg = unsafe { &*cfg };
        match cfg.inner.bracket(&unsafe { &*x }.inner, &unsafe { &*y }.inner) {
            Ok(result) => {
                unsafe { *out = Box::into_raw(Box::new(GwElement { inner: result })) };
                GwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// String number: the count of distinct degrees in the support.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gw_string_number(
    el: *const GwElement,
    out: *mut usize,
) -> GwStatus {
    guard(|| {
        nonnull!(el);
        nonnull!(out);
        unsafe { *out = structure::string_number(&(*el).inner) };
        GwStatus::Ok
    })
}

/// Greatest lower index over all terms; fails on the zero element.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gw_max_lower_index(
    el: *const GwElement,
    out: *mut i64,
) -> GwStatus {
    guard(|| {
        nonnull!(el);
        nonnull!(out);
        match structure::lp(&unsafe { &*el }.inner) {
            Ok(v) => {
                unsafe { *out = v };
                GwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Finds `M = (0|j)_t` with `[M, l]` nonzero and all lower indices
/// positive; returns the multiplier's text and the bracket.
///
/// # Safety
/// Pointers must be valid. Free the outputs with [`gw_string_free`] and
/// [`gw_element_free`].
#[no_mangle]
pub unsafe extern "C" fn gw_lemma1_multiplier(
    cfg: *const GwConfig,
    l: *const GwElement,
    multiplier_out: *mut *mut c_char,
    product_out: *mut *mut GwElement,
) -> GwStatus {
    guard(|| {
        nonnull!(cfg);
        nonnull!(l);
        nonnull!(multiplier_out);
        nonnull!(product_out);
        unsafe {
            *multiplier_out = ptr::null_mut();
            *product_out = ptr::null_mut();
        }
        match ideals::lemma1_multiplier(&unsafe { &*cfg }.inner, &unsafe { &*l }.inner) {
            Ok((m, product)) => {
                let status = give_string(m.to_string(), multiplier_out);
                if status != GwStatus::Ok {
                    return status;
                }
                unsafe { *product_out = Box::into_raw(Box::new(GwElement { inner: product })) };
                GwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Scans the box `|upper| ≤ box_upper`, `|lower| ≤ box_lower` for a basis
/// element that `ad l` fails to scale. On success `*counterexample_out`
/// holds its text, or null when every element of the box passes.
///
/// # Safety
/// Pointers must be valid. Free the output with [`gw_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gw_ad_diag_check(
    cfg: *const GwConfig,
    l: *const GwElement,
    box_upper: i64,
    box_lower: i64,
    counterexample_out: *mut *mut c_char,
) -> GwStatus {
    guard(|| {
        nonnull!(cfg);
        nonnull!(l);
        nonnull!(counterexample_out);
        unsafe { *counterexample_out = ptr::null_mut() };
        if box_upper < 0 || box_lower < 0 {
            set_error("box bounds must be non-negative");
            return GwStatus::InvalidInput;
        }
        let bbox = IndexBox::new(box_upper, box_lower);
        match ideals::ad_diag_check(&unsafe { &*cfg }.inner, &unsafe { &*l }.inner, bbox) {
            Ok(AdDiagOutcome::Counterexample(m)) => {
                give_string(m.to_string(), counterexample_out)
            }
            Ok(AdDiagOutcome::PassesBox) => GwStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Breadth-first ideal closure of `l`. `reached_mask_out` gets bit `k−1`
/// set for every direction `k` whose target `(0,…,0|0,…,0)_k` was
/// reached.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gw_ideal_witness(
    cfg: *const GwConfig,
    l: *const GwElement,
    mbox_upper: i64,
    mbox_lower: i64,
    rbox_upper: i64,
    rbox_lower: i64,
    max_iter: usize,
    rank_out: *mut usize,
    iterations_out: *mut usize,
    saturated_out: *mut bool,
    reached_mask_out: *mut u32,
) -> GwStatus {
    guard(|| {
        nonnull!(cfg);
        nonnull!(l);
        nonnull!(rank_out);
        nonnull!(iterations_out);
        nonnull!(saturated_out);
        nonnull!(reached_mask_out);
        if mbox_upper < 0 || mbox_lower < 0 || rbox_upper < 0 || rbox_lower < 0 {
            set_error("box bounds must be non-negative");
            return GwStatus::InvalidInput;
        }
        let cfg = &unsafe { &*cfg }.inner;
        if cfg.n() > 32 {
            set_error("reached-target mask supports rank at most 32");
            return GwStatus::InvalidInput;
        }
        let mbox = IndexBox::new(mbox_upper, mbox_lower);
        let rbox = IndexBox::new(rbox_upper, rbox_lower);
        match ideals::ideal_closure(cfg, &unsafe { &*l }.inner, mbox, rbox, max_iter) {
            Ok(report) => {
                let mut mask = 0u32;
                for k in report.reached_targets() {
                    mask |= 1 << (k - 1);
                }
                unsafe {
                    *rank_out = report.rank();
                    *iterations_out = report.iterations();
                    *saturated_out = report.saturated();
                    *reached_mask_out = mask;
                }
                GwStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Antidifferentiates a rank-one function element given in the textual
/// grammar without direction suffixes, e.g. `"(1|1) - (0|2)"`, returning
/// `g` with `∂(g) = f` as text.
///
/// # Safety
/// Pointers must be valid. Free the output with [`gw_string_free`].
#[no_mangle]
pub unsafe extern "C" fn gw_integrate(
    cfg: *const GwConfig,
    f_text: *const c_char,
    out: *mut *mut c_char,
) -> GwStatus {
    guard(|| {
        nonnull!(cfg);
        nonnull!(out);
        unsafe { *out = ptr::null_mut() };
        let text = match unsafe { read_str(f_text) } {
            Ok(t) => t,
            Err(status) => return status,
        };
        let cfg = &unsafe { &*cfg }.inner;
        let f = match text::parse_function_element(text, cfg.n()) {
            Ok(f) => f,
            Err(e) => return fail(e.into()),
        };
        match derivations::integrate(cfg, &f) {
            Ok(g) => give_string(g.to_string(), out),
            Err(e) => fail(e),
        }
    })
}
