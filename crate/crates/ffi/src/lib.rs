//! C ABI over the reconstruction library.
//!
//! Spectra and expansions live behind opaque handles; every fallible call
//! returns a [`refless_status`] and, on failure, stores a human-readable
//! message that [`refless_last_error_message`] exposes per thread. Handles
//! are immutable after construction, so sharing them across threads for
//! concurrent reads is safe; creation and destruction follow the usual
//! single-owner rules.
//!
//! The matching header is generated into `include/refless.h` by the build
//! script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::slice;

use refless::spectral::{self, Norming, SpectralInput, ValidatedSpectrum};
use refless::tau::{self, TauExpansion};
use refless::{spectra, wavefunctions, Error};

/// A validated spectrum: ascending decay rates, one shift per state, and the
/// physical constant relating rates to energies.
#[allow(non_camel_case_types)]
pub struct refless_spectrum {
    inner: ValidatedSpectrum,
}

/// The cosh-term expansion of the spectral determinant. Self-contained once
/// built; the spectrum handle it came from may be freed independently.
#[allow(non_camel_case_types)]
pub struct refless_expansion {
    inner: TauExpansion,
}

/// Status of every fallible call. Zero is success; any other value leaves a
/// message readable via `refless_last_error_message` on the same thread.
#[allow(non_camel_case_types)]
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum refless_status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    NonAscendingSpectrum = 3,
    NonPositiveKappa = 4,
    DegenerateGap = 5,
    LengthMismatch = 6,
    OverflowShift = 7,
    OverflowRange = 8,
    SizeLimit = 9,
    NotSquare = 10,
    IndexOutOfRange = 11,
    EmptyGrid = 12,
    NonUniformGrid = 13,
    StateCountMismatch = 14,
    InsufficientDecay = 15,
    NoBoundStates = 16,
    RootBracketFailure = 17,
    NonPositive = 18,
    UnknownPreset = 19,
    InvalidInput = 20,
}

impl From<&Error> for refless_status {
    fn from(e: &Error) -> refless_status {
        match e {
            Error::NonAscendingSpectrum { .. } => refless_status::NonAscendingSpectrum,
            Error::NonPositiveKappa { .. } => refless_status::NonPositiveKappa,
            Error::DegenerateGap { .. } => refless_status::DegenerateGap,
            Error::LengthMismatch { .. } => refless_status::LengthMismatch,
            Error::OverflowShift { .. } => refless_status::OverflowShift,
            Error::OverflowRange { .. } => refless_status::OverflowRange,
            Error::SizeLimit { .. } => refless_status::SizeLimit,
            Error::NotSquare { .. } => refless_status::NotSquare,
            Error::IndexOutOfRange { .. } => refless_status::IndexOutOfRange,
            Error::EmptyGrid => refless_status::EmptyGrid,
            Error::NonUniformGrid { .. } => refless_status::NonUniformGrid,
            Error::StateCountMismatch { .. } => refless_status::StateCountMismatch,
            Error::InsufficientDecay { .. } => refless_status::InsufficientDecay,
            Error::NoBoundStates { .. } => refless_status::NoBoundStates,
            Error::RootBracketFailure { .. } => refless_status::RootBracketFailure,
            Error::NonPositive { .. } => refless_status::NonPositive,
            Error::UnknownPreset(_) => refless_status::UnknownPreset,
            Error::InvalidInput(_) => refless_status::InvalidInput,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn ok() -> refless_status {
    LAST_ERROR.with(|slot| slot.borrow_mut().take());
    refless_status::Ok
}

fn fail(status: refless_status, message: String) -> refless_status {
    // Library messages never contain NUL; fall back to empty rather than abort.
    let message = CString::new(message).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
    status
}

fn fail_with(err: Error) -> refless_status {
    let status = refless_status::from(&err);
    fail(status, err.to_string())
}

fn null_arg(what: &str) -> refless_status {
    fail(refless_status::NullPointer, format!("{what} must not be null"))
}

/// Caller has already rejected null `ptr` for nonzero `len`.
unsafe fn floats<'a>(ptr: *const f64, len: usize) -> &'a [f64] {
    if len == 0 {
        &[]
    } else {
        slice::from_raw_parts(ptr, len)
    }
}

unsafe fn finish_spectrum(
    input: SpectralInput,
    out: *mut *mut refless_spectrum,
) -> refless_status {
    match spectral::validate(&input) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(refless_spectrum { inner }));
            ok()
        }
        Err(e) => fail_with(e),
    }
}

/// Creates a spectrum from `len` ascending decay rates with the norming that
/// makes the reconstructed potential an even function of `x`. On success
/// writes a handle to `*out`; the caller owns it and must release it with
/// `refless_spectrum_free`. On failure `*out` is null.
///
/// # Safety
/// `kappas` must point to `len` readable doubles (or be null when `len` is 0)
/// and `out` to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_new_symmetric(
    kappas: *const f64,
    len: usize,
    c_phys: f64,
    out: *mut *mut refless_spectrum,
) -> refless_status {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    if kappas.is_null() && len > 0 {
        return null_arg("kappas");
    }
    let input = SpectralInput {
        kappas: floats(kappas, len).to_vec(),
        norming: Norming::Symmetric,
        c_phys,
    };
    finish_spectrum(input, out)
}

/// Creates a spectrum from `len` decay rates and `len` spatial shifts, one per
/// state. Ownership and failure behavior as in `refless_spectrum_new_symmetric`.
///
/// # Safety
/// `kappas` and `shifts` must each point to `len` readable doubles (or be
/// null when `len` is 0) and `out` to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_new_with_shifts(
    kappas: *const f64,
    shifts: *const f64,
    len: usize,
    c_phys: f64,
    out: *mut *mut refless_spectrum,
) -> refless_status {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    if (kappas.is_null() || shifts.is_null()) && len > 0 {
        return null_arg("kappas/shifts");
    }
    let input = SpectralInput {
        kappas: floats(kappas, len).to_vec(),
        norming: Norming::Shifts(floats(shifts, len).to_vec()),
        c_phys,
    };
    finish_spectrum(input, out)
}

/// Creates a spectrum from `len` decay rates and `len` positive norming
/// constants, one per state. Ownership and failure behavior as in
/// `refless_spectrum_new_symmetric`.
///
/// # Safety
/// `kappas` and `constants` must each point to `len` readable doubles (or be
/// null when `len` is 0) and `out` to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_new_with_constants(
    kappas: *const f64,
    constants: *const f64,
    len: usize,
    c_phys: f64,
    out: *mut *mut refless_spectrum,
) -> refless_status {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    if (kappas.is_null() || constants.is_null()) && len > 0 {
        return null_arg("kappas/constants");
    }
    let input = SpectralInput {
        kappas: floats(kappas, len).to_vec(),
        norming: Norming::Constants(floats(constants, len).to_vec()),
        c_phys,
    };
    finish_spectrum(input, out)
}

/// Creates a spectrum from a preset name: `pt:N` (integer rates `1..N`),
/// `well:R` (finite square well of dimensionless radius `R`), or `morse:W`
/// (Morse well depth parameter `W`). Ownership and failure behavior as in
/// `refless_spectrum_new_symmetric`.
///
/// # Safety
/// `name` must be a readable NUL-terminated string and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_preset(
    name: *const c_char,
    c_phys: f64,
    out: *mut *mut refless_spectrum,
) -> refless_status {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    if name.is_null() {
        return null_arg("name");
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        return fail(
            refless_status::InvalidUtf8,
            "preset name is not valid UTF-8".into(),
        );
    };
    match spectra::parse_preset(name, c_phys) {
        Ok(input) => finish_spectrum(input, out),
        Err(e) => fail_with(e),
    }
}

/// Creates a spectrum from the JSON document format
/// `{"kappas":[...], "norming":{"mode":..., "values":[...]}, "c_phys":...}`.
/// Ownership and failure behavior as in `refless_spectrum_new_symmetric`.
///
/// # Safety
/// `text` must be a readable NUL-terminated string and `out` a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_from_json(
    text: *const c_char,
    out: *mut *mut refless_spectrum,
) -> refless_status {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    if text.is_null() {
        return null_arg("text");
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        return fail(
            refless_status::InvalidUtf8,
            "spectrum document is not valid UTF-8".into(),
        );
    };
    match serde_json::from_str::<SpectralInput>(text) {
        Ok(input) => finish_spectrum(input, out),
        Err(e) => fail_with(Error::InvalidInput(e.to_string())),
    }
}

/// Number of bound states, or 0 for a null handle.
///
/// # Safety
/// `s` must be a live spectrum handle or null.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_len(s: *const refless_spectrum) -> usize {
    s.as_ref().map_or(0, |s| s.inner.len())
}

/// The physical constant the spectrum was built with, or NaN for a null handle.
///
/// # Safety
/// `s` must be a live spectrum handle or null.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_c_phys(s: *const refless_spectrum) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.inner.c_phys())
}

/// Copies the ascending decay rates into `out`.
///
/// # Safety
/// `s` must be a live spectrum handle or null; `out` must hold
/// `refless_spectrum_len(s)` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_kappas(
    s: *const refless_spectrum,
    out: *mut f64,
) -> refless_status {
    let Some(s) = s.as_ref() else {
        return null_arg("spectrum");
    };
    if out.is_null() {
        return null_arg("out");
    }
    ptr::copy_nonoverlapping(s.inner.kappas().as_ptr(), out, s.inner.len());
    ok()
}

/// Copies the per-state spatial shifts into `out`.
///
/// # Safety
/// `s` must be a live spectrum handle or null; `out` must hold
/// `refless_spectrum_len(s)` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_shifts(
    s: *const refless_spectrum,
    out: *mut f64,
) -> refless_status {
    let Some(s) = s.as_ref() else {
        return null_arg("spectrum");
    };
    if out.is_null() {
        return null_arg("out");
    }
    ptr::copy_nonoverlapping(s.inner.shifts().as_ptr(), out, s.inner.len());
    ok()
}

/// Copies the bound-state energies `-c_phys * kappa_n^2` into `out`, most
/// negative first (the reverse of the rate order).
///
/// # Safety
/// `s` must be a live spectrum handle or null; `out` must hold
/// `refless_spectrum_len(s)` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_energies(
    s: *const refless_spectrum,
    out: *mut f64,
) -> refless_status {
    let Some(s) = s.as_ref() else {
        return null_arg("spectrum");
    };
    if out.is_null() {
        return null_arg("out");
    }
    let energies = s.inner.energies();
    ptr::copy_nonoverlapping(energies.as_ptr(), out, energies.len());
    ok()
}

/// Releases a spectrum handle; null is ignored.
///
/// # Safety
/// `s` must have come from one of the spectrum constructors and must not be
/// used after this call.
#[no_mangle]
pub unsafe extern "C" fn refless_spectrum_free(s: *mut refless_spectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Builds the cosh-term expansion for a spectrum. On success writes a handle
/// to `*out`; the caller owns it and must release it with
/// `refless_expansion_free`. On failure `*out` is null.
///
/// # Safety
/// `s` must be a live spectrum handle or null and `out` a writable pointer
/// slot.
#[no_mangle]
pub unsafe extern "C" fn refless_expansion_build(
    s: *const refless_spectrum,
    out: *mut *mut refless_expansion,
) -> refless_status {
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    let Some(s) = s.as_ref() else {
        return null_arg("spectrum");
    };
    match tau::build_expansion(&s.inner) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(refless_expansion { inner }));
            ok()
        }
        Err(e) => fail_with(e),
    }
}

/// Number of cosh terms (`2^(N-1)` for `N` states), or 0 for a null handle.
///
/// # Safety
/// `e` must be a live expansion handle or null.
#[no_mangle]
pub unsafe extern "C" fn refless_expansion_term_count(e: *const refless_expansion) -> usize {
    e.as_ref().map_or(0, |e| e.inner.term_count())
}

/// Releases an expansion handle; null is ignored.
///
/// # Safety
/// `e` must have come from `refless_expansion_build` and must not be used
/// after this call.
#[no_mangle]
pub unsafe extern "C" fn refless_expansion_free(e: *mut refless_expansion) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Evaluates the reconstructed potential at `x`. Finite for every `x`; the
/// evaluator works in the log domain, so the determinant overflowing is not a
/// concern.
///
/// # Safety
/// `e` must be a live expansion handle or null; `out` must be a writable
/// double slot.
#[no_mangle]
pub unsafe extern "C" fn refless_potential_eval(
    e: *const refless_expansion,
    x: f64,
    out: *mut f64,
) -> refless_status {
    let Some(e) = e.as_ref() else {
        return null_arg("expansion");
    };
    if out.is_null() {
        return null_arg("out");
    }
    *out = tau::eval_potential(&e.inner, x);
    ok()
}

/// Evaluates the reconstructed potential at `len` arbitrary points. The points
/// need not be ordered or evenly spaced.
///
/// # Safety
/// `e` must be a live expansion handle or null; `xs` must point to `len`
/// readable doubles (or be null when `len` is 0) and `out` to `len` writable
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn refless_potential_sample(
    e: *const refless_expansion,
    xs: *const f64,
    len: usize,
    out: *mut f64,
) -> refless_status {
    let Some(e) = e.as_ref() else {
        return null_arg("expansion");
    };
    if (xs.is_null() || out.is_null()) && len > 0 {
        return null_arg("xs/out");
    }
    for (i, &x) in floats(xs, len).iter().enumerate() {
        *out.add(i) = tau::eval_potential(&e.inner, x);
    }
    ok()
}

/// Evaluates the normalized bound-state wavefunction for the 1-based state
/// index `n` at `x`. State `n` decays like `exp(-kappa_n x)` and has `N - n`
/// nodes.
///
/// # Safety
/// `s` must be a live spectrum handle or null; `out` must be a writable
/// double slot.
#[no_mangle]
pub unsafe extern "C" fn refless_psi_eval(
    s: *const refless_spectrum,
    n: usize,
    x: f64,
    out: *mut f64,
) -> refless_status {
    let Some(s) = s.as_ref() else {
        return null_arg("spectrum");
    };
    if out.is_null() {
        return null_arg("out");
    }
    match wavefunctions::eval_psi(&s.inner, n, x) {
        Ok(v) => {
            *out = v;
            ok()
        }
        Err(e) => fail_with(e),
    }
}

/// Evaluates all bound-state wavefunctions at `x` in one solve, writing state
/// 1 first.
///
/// # Safety
/// `s` must be a live spectrum handle or null; `out` must hold
/// `refless_spectrum_len(s)` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn refless_psi_eval_all(
    s: *const refless_spectrum,
    x: f64,
    out: *mut f64,
) -> refless_status {
    let Some(s) = s.as_ref() else {
        return null_arg("spectrum");
    };
    if out.is_null() {
        return null_arg("out");
    }
    match wavefunctions::eval_all_psi(&s.inner, x) {
        Ok(values) => {
            ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
            ok()
        }
        Err(e) => fail_with(e),
    }
}

/// Message for the most recent failure on the calling thread, or null when
/// the last call succeeded. The pointer stays valid until the next call into
/// the library from this thread; copy the string to keep it longer.
#[no_mangle]
pub extern "C" fn refless_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Static name of a status code, for log lines.
#[no_mangle]
pub extern "C" fn refless_status_name(status: refless_status) -> *const c_char {
    let name: &'static CStr = match status {
        refless_status::Ok => c"Ok",
        refless_status::NullPointer => c"NullPointer",
        refless_status::InvalidUtf8 => c"InvalidUtf8",
        refless_status::NonAscendingSpectrum => c"NonAscendingSpectrum",
        refless_status::NonPositiveKappa => c"NonPositiveKappa",
        refless_status::DegenerateGap => c"DegenerateGap",
        refless_status::LengthMismatch => c"LengthMismatch",
        refless_status::OverflowShift => c"OverflowShift",
        refless_status::OverflowRange => c"OverflowRange",
        refless_status::SizeLimit => c"SizeLimit",
        refless_status::NotSquare => c"NotSquare",
        refless_status::IndexOutOfRange => c"IndexOutOfRange",
        refless_status::EmptyGrid => c"EmptyGrid",
        refless_status::NonUniformGrid => c"NonUniformGrid",
        refless_status::StateCountMismatch => c"StateCountMismatch",
        refless_status::InsufficientDecay => c"InsufficientDecay",
        refless_status::NoBoundStates => c"NoBoundStates",
        refless_status::RootBracketFailure => c"RootBracketFailure",
        refless_status::NonPositive => c"NonPositive",
        refless_status::UnknownPreset => c"UnknownPreset",
        refless_status::InvalidInput => c"InvalidInput",
    };
    name.as_ptr()
}
