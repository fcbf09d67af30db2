//! C ABI over the natanzon library.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `*_free`. Every fallible call returns an [`NzStatus`]; on failure the
//! message is kept per thread and read with [`nz_last_error_message`].
//! Panics never cross the boundary: they surface as `NZ_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use natanzon::params::{potential_in_z, pt_to_natanzon};
use natanzon::scattering::{reflection_coefficient, ScatterChannel};
use natanzon::spectrum::{solve_spectrum, BoundState};
use natanzon::{Error, NatanzonParams, PtParams};
use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Domain = 3,
    Computation = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Opaque parameter set.
pub struct NzParams {
    inner: NatanzonParams,
}

/// Opaque list of bound states, ordered by `nu`.
pub struct NzSpectrum {
    states: Vec<BoundState>,
}

/// One bound state copied out of an [`NzSpectrum`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NzBoundState {
    pub nu: usize,
    pub energy: f64,
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub p: f64,
    pub q: f64,
    pub m: f64,
    /// True when the state sits on the continuum threshold.
    pub threshold: bool,
}

impl From<&BoundState> for NzBoundState {
    fn from(s: &BoundState) -> Self {
        Self {
            nu: s.nu,
            energy: s.energy,
            alpha: s.alpha,
            beta: s.beta,
            delta: s.delta,
            p: s.p,
            q: s.q,
            m: s.m,
            threshold: s.threshold,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    // interior NULs cannot occur in our messages; strip defensively
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> NzStatus {
    match err {
        Error::InvalidParams(_) | Error::SingularQuadratic { .. } | Error::Config(_) => NzStatus::InvalidParams,
        Error::Domain { .. } | Error::NegativeRadicand { .. } => NzStatus::Domain,
        Error::OutOfRange { .. } => NzStatus::OutOfRange,
        _ => NzStatus::Computation,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (NzStatus, String)>) -> NzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NzStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NzStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (NzStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NzStatus, String) {
    (NzStatus::NullPointer, format!("null pointer: {what}"))
}

/// Message of the last failed call on this thread, or NULL if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn nz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Validates the six constants and writes a new handle to `out`.
///
/// # Safety
/// `out` must be NULL or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn nz_params_new(
    f: f64,
    h0: f64,
    h1: f64,
    a: f64,
    c0: f64,
    c1: f64,
    out: *mut *mut NzParams,
) -> NzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = NatanzonParams::new(f, h0, h1, a, c0, c1);
        inner.ensure_valid().map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NzParams { inner }));
        Ok(())
    })
}

/// Handle for the Pöschl–Teller set `(A, B)`; `shifted` selects the
/// convention with vanishing asymptotic value.
///
/// # Safety
/// `out` must be NULL or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn nz_params_from_pt(a: f64, b: f64, shifted: bool, out: *mut *mut NzParams) -> NzStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pt = PtParams::new(a, b, shifted).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NzParams {
            inner: pt_to_natanzon(&pt),
        }));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a handle from `nz_params_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nz_params_free(p: *mut NzParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `V` at `z ∈ (0, 1)`.
///
/// # Safety
/// `p` must be a live handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nz_potential_in_z(p: *const NzParams, z: f64, out: *mut f64) -> NzStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = potential_in_z(&p.inner, z).map_err(lib_err)?;
        Ok(())
    })
}

/// Solves the bound-state spectrum and writes a new handle to `out`.
///
/// # Safety
/// `p` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn nz_spectrum_solve(p: *const NzParams, out: *mut *mut NzSpectrum) -> NzStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let states = solve_spectrum(&p.inner).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NzSpectrum { states }));
        Ok(())
    })
}

/// Number of states; 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn nz_spectrum_len(s: *const NzSpectrum) -> usize {
    s.as_ref().map_or(0, |s| s.states.len())
}

/// Copies state `index` into `out`.
///
/// # Safety
/// `s` must be a live spectrum handle; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn nz_spectrum_get(s: *const NzSpectrum, index: usize, out: *mut NzBoundState) -> NzStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let st = s.states.get(index).ok_or_else(|| {
            (
                NzStatus::OutOfRange,
                format!("index {index} out of range for {} states", s.states.len()),
            )
        })?;
        *out = st.into();
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a spectrum handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nz_spectrum_free(s: *mut NzSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Reflection ratio `R_m` of the channel with spectral parameter `λ`,
/// starting weight `m0` and scale `c1`.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn nz_reflection_coefficient(
    lambda_re: f64,
    lambda_im: f64,
    m0: f64,
    c1: f64,
    m: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> NzStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let ch = ScatterChannel::new(Complex64::new(lambda_re, lambda_im), m0, c1).map_err(lib_err)?;
        let r = reflection_coefficient(&ch, m).map_err(lib_err)?;
        *out_re = r.re;
        *out_im = r.im;
        Ok(())
    })
}
