//! C ABI over `weil_lab`.
//!
//! Every fallible call returns a [`WlStatus`]; on failure a message is kept
//! per thread and can be read with [`wl_last_error_message`]. Objects are
//! opaque handles released with their `_free` function; strings returned by
//! the library are released with [`wl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use weil_lab::analyzer::{self, AnalyzerOptions, BatchInput};
use weil_lab::classify::{self, Aliases, Filters, Options, Preset};
use weil_lab::group::PermGroup;
use weil_lab::wpr::{WeightFunction, WeightedPermRep};
use weil_lab::Error;

/// Result codes. `WL_STATUS_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WlStatus {
    Ok = 0,
    SizeMismatch = 1,
    InvalidGenerator = 2,
    Parse = 3,
    Validation = 4,
    Precondition = 5,
    Input = 6,
    ResourceLimit = 7,
    Numerical = 8,
    Io = 9,
    NullPointer = 10,
    InvalidUtf8 = 11,
    Panic = 12,
}

impl From<&Error> for WlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::SizeMismatch { .. } => WlStatus::SizeMismatch,
            Error::InvalidGenerator(_) => WlStatus::InvalidGenerator,
            Error::Parse(_) => WlStatus::Parse,
            Error::Validation(_) => WlStatus::Validation,
            Error::Precondition(_) => WlStatus::Precondition,
            Error::Input(_) => WlStatus::Input,
            Error::ResourceLimit(_) => WlStatus::ResourceLimit,
            Error::Numerical(_) => WlStatus::Numerical,
            Error::Io(_) => WlStatus::Io,
        }
    }
}

/// A weighted permutation representation.
pub struct WlWpr(WeightedPermRep);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(WlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(WlStatus::from(&e), e.to_string())
    }
}

fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> WlStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WlStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            WlStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(WlStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(WlStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(WlStatus::NullPointer, "output pointer is null".into()));
    }
    *out = v;
    Ok(())
}

unsafe fn handle<'a>(h: *const WlWpr) -> Result<&'a WeightedPermRep, Fail> {
    h.as_ref().map(|w| &w.0).ok_or_else(|| Fail(WlStatus::NullPointer, "handle is null".into()))
}

unsafe fn write_json<T: serde::Serialize>(out: *mut *mut c_char, v: &T) -> Result<(), Fail> {
    let s = serde_json::to_string(v).map_err(|e| Fail(WlStatus::Io, e.to_string()))?;
    write_out(out, CString::new(s).expect("json has no nul").into_raw())
}

/// Last error message on this thread, or NULL. Valid until the next call
/// into the library on the same thread.
#[no_mangle]
pub extern "C" fn wl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn wl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds `ρ = (w, G)` from a slope list (`"0,0,1/2,1/2,1,1"`) and generators
/// of `G/⟨ι⟩` in cycle notation; `ι` is adjoined.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_new(
    slopes: *const c_char,
    generators: *const c_char,
    out: *mut *mut WlWpr,
) -> WlStatus {
    guard(|| {
        let w = WeightFunction::from_slopes_str(read_str(slopes, "slopes")?)?;
        let group = PermGroup::parse_with_conjugation(w.g(), read_str(generators, "generators")?)?;
        let rho = WeightedPermRep::new(w, group)?;
        write_out(out, Box::into_raw(Box::new(WlWpr(rho))))
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `h` must come from [`wl_wpr_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_free(h: *mut WlWpr) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_g(h: *const WlWpr, out: *mut usize) -> WlStatus {
    guard(|| write_out(out, handle(h)?.g()))
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_group_order(h: *const WlWpr, out: *mut usize) -> WlStatus {
    guard(|| write_out(out, handle(h)?.group().order()))
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_angle_rank(h: *const WlWpr, out: *mut usize) -> WlStatus {
    guard(|| write_out(out, handle(h)?.angle_rank()))
}

/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_is_geometrically_simple(h: *const WlWpr, out: *mut bool) -> WlStatus {
    guard(|| write_out(out, handle(h)?.is_geometrically_simple()))
}

/// Fails with `WL_STATUS_PRECONDITION` unless the representation is
/// geometrically simple.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_is_exceptional(h: *const WlWpr, out: *mut bool) -> WlStatus {
    guard(|| {
        let e = handle(h)?.is_exceptional()?;
        write_out(out, e)
    })
}

/// JSON with the exceptional witnesses.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable. Free the result with
/// [`wl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wl_wpr_witnesses_json(h: *const WlWpr, out: *mut *mut c_char) -> WlStatus {
    guard(|| {
        let w = handle(h)?.exceptional_witnesses()?;
        write_json(out, &w)
    })
}

/// Analyzer report for an LMFDB label, as JSON. `precision_bits = 0` selects
/// the default.
///
/// # Safety
/// `label` must be NUL-terminated; `out` must be writable. Free the result
/// with [`wl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn wl_analyze_label(
    label: *const c_char,
    precision_bits: usize,
    out: *mut *mut c_char,
) -> WlStatus {
    guard(|| {
        let opts = analyzer_options(precision_bits);
        let r = analyzer::analyze_label(read_str(label, "label")?, &opts)?;
        write_json(out, &r)
    })
}

/// Analyzer report for a Frobenius polynomial given either as `a_1..a_g`
/// or as the full descending list `1, a_1, …, a_2g`.
///
/// # Safety
/// `coefficients` must point to `len` integers; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_analyze_coefficients(
    coefficients: *const i64,
    len: usize,
    p: u64,
    q: u64,
    precision_bits: usize,
    out: *mut *mut c_char,
) -> WlStatus {
    guard(|| {
        if coefficients.is_null() {
            return Err(Fail(WlStatus::NullPointer, "coefficients is null".into()));
        }
        let c = std::slice::from_raw_parts(coefficients, len).to_vec();
        let input = BatchInput { label: None, coefficients: Some(c), p: Some(p), q: Some(q) };
        let r = input.run(&analyzer_options(precision_bits))?;
        write_json(out, &r)
    })
}

fn analyzer_options(precision_bits: usize) -> AnalyzerOptions {
    let mut o = AnalyzerOptions::default();
    if precision_bits != 0 {
        o.precision_bits = precision_bits;
    }
    o
}

/// Classification table for one Newton polygon as JSON. `preset` is
/// `"appendix"`, `"all"` or `"exceptional-only"` (NULL means appendix).
///
/// # Safety
/// String arguments must be NUL-terminated or NULL where allowed; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn wl_classify_json(
    slopes: *const c_char,
    preset: *const c_char,
    out: *mut *mut c_char,
) -> WlStatus {
    guard(|| {
        let np = weil_lab::wpr::NewtonPolygon::parse(read_str(slopes, "slopes")?)?;
        let preset: Preset = if preset.is_null() { Preset::Appendix } else { read_str(preset, "preset")?.parse()? };
        let opts = Options { aliases: Some(Aliases::builtin()), ..Options::default() };
        let t = classify::classify_newton(&np, &Filters::preset(preset), &opts)?;
        write_json(out, &t)
    })
}
