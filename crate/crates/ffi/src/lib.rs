//! C interface to the xywave library.
//!
//! Every fallible function returns an [`XywaveStatus`]; on failure a message is
//! available from [`xywave_last_error`] on the same thread until the next call.
//! Objects are handed out as opaque pointers and released with their `_free`
//! function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use xywave_core::analytic::{ModelParams, Quadrature};
use xywave_core::dynamics::DynamicsKernels;
use xywave_core::entanglement::concurrence_xstate_closed;
use xywave_core::oracle::{OracleChain, PauliString};
use xywave_core::thermal::ThermalCorrelators;
use xywave_core::zero_temp::{wave_profile, WaveProfile, DEFAULT_MIN_MASS};
use xywave_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XywaveStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    NotConverged = 3,
    InvalidState = 4,
    OutOfRange = 5,
    Panic = 6,
}

/// Table of thermal correlators `G_x` for one `(λ, γ, β)`.
pub struct XywaveThermal(ThermalCorrelators);

/// Zero-temperature single-excitation profile after a local measurement.
pub struct XywaveWave(WaveProfile);

/// Periodic chain diagonalized exactly.
pub struct XywaveChain(OracleChain);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> XywaveStatus {
    match e {
        Error::InvalidParameter(_) | Error::AnisotropyUnsupported(_) | Error::CouplingOutOfRange(_) => {
            XywaveStatus::InvalidParameter
        }
        Error::QuadratureNotConverged { .. } | Error::Eigen(_) => XywaveStatus::NotConverged,
        Error::NotPositiveSemidefinite(_) | Error::InvalidDensity(_) | Error::DegenerateConditioning(_) => {
            XywaveStatus::InvalidState
        }
        Error::ChainSize(_) | Error::MissingOffset(_) | Error::WrapAround(_) => XywaveStatus::OutOfRange,
    }
}

/// Runs `f`, translating errors and panics into a status and last-error message.
fn guard<F: FnOnce() -> Result<(), Error>>(f: F) -> XywaveStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            XywaveStatus::Ok
        }
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let what = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {what}"));
            XywaveStatus::Panic
        }
    }
}

fn null() -> Error {
    Error::InvalidParameter("null pointer argument".into())
}

/// Writes through `out`, failing on null.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Error> {
    out.as_mut().map(|slot| *slot = value).ok_or_else(null)
}

unsafe fn borrow<'a, T>(h: *const T) -> Result<&'a T, Error> {
    h.as_ref().ok_or_else(null)
}

fn checked(status: XywaveStatus, null_args: bool) -> XywaveStatus {
    if null_args {
        set_error("null pointer argument".into());
        XywaveStatus::NullPointer
    } else {
        status
    }
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message describing the last failure on this thread; empty after a success.
/// The pointer stays valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn xywave_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn xywave_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Computes `G_x` for every `x` in `[-max_offset, max_offset]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn xywave_thermal_new(
    lambda: f64,
    gamma: f64,
    beta: f64,
    max_offset: u32,
    out: *mut *mut XywaveThermal,
) -> XywaveStatus {
    if out.is_null() {
        return checked(XywaveStatus::NullPointer, true);
    }
    *out = ptr::null_mut();
    guard(|| {
        let p = ModelParams::new(lambda, gamma, beta)?;
        let m = i64::from(max_offset.max(1));
        let table = ThermalCorrelators::compute(&p, &Quadrature::default(), -m..=m)?;
        write(out, boxed(XywaveThermal(table)))
    })
}

/// # Safety
/// `handle` must come from [`xywave_thermal_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xywave_thermal_free(handle: *mut XywaveThermal) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_thermal_g(handle: *const XywaveThermal, x: i64, out: *mut f64) -> XywaveStatus {
    checked(guard(|| write(out, borrow(handle)?.0.g(x)?)), handle.is_null() || out.is_null())
}

/// Single-site `⟨σ_z⟩`.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_thermal_magnetization(handle: *const XywaveThermal, out: *mut f64) -> XywaveStatus {
    checked(guard(|| write(out, borrow(handle)?.0.magnetization()?)), handle.is_null() || out.is_null())
}

/// `⟨σˣσˣ⟩`, `⟨σʸσʸ⟩`, `⟨σᶻσᶻ⟩` at separation `x ≠ 0`, written to `out[0..3]`.
///
/// # Safety
/// `handle` must be live; `out` must point to three writable doubles.
#[no_mangle]
pub unsafe extern "C" fn xywave_thermal_pair(handle: *const XywaveThermal, x: i64, out: *mut f64) -> XywaveStatus {
    checked(
        guard(|| {
            let c = borrow(handle)?.0.pair_correlators(x)?;
            if out.is_null() {
                return Err(null());
            }
            std::slice::from_raw_parts_mut(out, 3).copy_from_slice(&[c.xx, c.yy, c.zz]);
            Ok(())
        }),
        handle.is_null() || out.is_null(),
    )
}

/// Concurrence of the reduced state of two sites at separation `x ≠ 0`.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_thermal_concurrence(
    handle: *const XywaveThermal,
    x: i64,
    out: *mut f64,
) -> XywaveStatus {
    checked(
        guard(|| write(out, borrow(handle)?.0.two_site_density(x)?.concurrence()?)),
        handle.is_null() || out.is_null(),
    )
}

/// Nearest-neighbour concurrence of the isotropic chain from `G_0` and `G_1`.
#[no_mangle]
pub extern "C" fn xywave_concurrence_closed(g0: f64, g1: f64) -> f64 {
    concurrence_xstate_closed(g0, g1)
}

/// `⟨σ_z(t)⟩/2` at offset `x` from a site measured at `t = 0` (isotropic chain).
/// `selective` non-zero conditions on the up outcome; zero discards it.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_magnetization_after_measurement(
    lambda: f64,
    beta: f64,
    x: i64,
    t: f64,
    selective: i32,
    out: *mut f64,
) -> XywaveStatus {
    checked(
        guard(|| {
            let k = DynamicsKernels::compute(x, t, &ModelParams::isotropic(lambda, beta)?, &Quadrature::default())?;
            write(out, if selective != 0 { k.selective()? } else { k.nonselective() })
        }),
        out.is_null(),
    )
}

/// Amplitude profile at time `t` of the excitation created at site `measured_site`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn xywave_wave_new(
    measured_site: i64,
    t: f64,
    lambda: f64,
    out: *mut *mut XywaveWave,
) -> XywaveStatus {
    if out.is_null() {
        return checked(XywaveStatus::NullPointer, true);
    }
    *out = ptr::null_mut();
    guard(|| write(out, boxed(XywaveWave(wave_profile(measured_site, t, lambda, DEFAULT_MIN_MASS)?))))
}

/// # Safety
/// `handle` must come from [`xywave_wave_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xywave_wave_free(handle: *mut XywaveWave) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Real amplitude `w` at an absolute site; zero outside the stored window.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_wave_amplitude(handle: *const XywaveWave, site: i64, out: *mut f64) -> XywaveStatus {
    checked(guard(|| write(out, borrow(handle)?.0.amplitude(site))), handle.is_null() || out.is_null())
}

/// Amplitude at offset `x` from the measured site.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_wave_at_offset(handle: *const XywaveWave, x: i64, out: *mut f64) -> XywaveStatus {
    checked(guard(|| write(out, borrow(handle)?.0.at_offset(x))), handle.is_null() || out.is_null())
}

/// Inclusive site range holding the stored amplitudes.
///
/// # Safety
/// `handle` must be live; `first` and `last` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_wave_window(
    handle: *const XywaveWave,
    first: *mut i64,
    last: *mut i64,
) -> XywaveStatus {
    checked(
        guard(|| {
            let w = borrow(handle)?.0.window();
            write(first, *w.start())?;
            write(last, *w.end())
        }),
        handle.is_null() || first.is_null() || last.is_null(),
    )
}

/// Offset from the measured site with the largest fidelity.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_wave_fidelity_peak(handle: *const XywaveWave, out: *mut i64) -> XywaveStatus {
    checked(guard(|| write(out, borrow(handle)?.0.fidelity_peak())), handle.is_null() || out.is_null())
}

/// Exact diagonalization of a periodic chain of `sites` spins.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn xywave_chain_new(
    sites: usize,
    lambda: f64,
    gamma: f64,
    out: *mut *mut XywaveChain,
) -> XywaveStatus {
    if out.is_null() {
        return checked(XywaveStatus::NullPointer, true);
    }
    *out = ptr::null_mut();
    guard(|| {
        // β only enters per query
        let p = ModelParams::ground_state(lambda, gamma)?;
        write(out, boxed(XywaveChain(OracleChain::new(sites, &p)?)))
    })
}

/// # Safety
/// `handle` must come from [`xywave_chain_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn xywave_chain_free(handle: *mut XywaveChain) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Thermal expectation of a Pauli string such as `"X0 X1"` or `"Z3"`.
///
/// # Safety
/// `handle` must be live; `pauli` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_chain_expectation(
    handle: *const XywaveChain,
    beta: f64,
    pauli: *const c_char,
    out: *mut f64,
) -> XywaveStatus {
    checked(
        guard(|| {
            let chain = borrow(handle)?;
            if pauli.is_null() {
                return Err(null());
            }
            let text = std::ffi::CStr::from_ptr(pauli)
                .to_str()
                .map_err(|_| Error::InvalidParameter("Pauli string is not UTF-8".into()))?;
            let op: PauliString = text.parse()?;
            write(out, chain.0.thermal_expectations(beta, &[op])?[0])
        }),
        handle.is_null() || pauli.is_null() || out.is_null(),
    )
}

/// `⟨σ_z^m(t)⟩/2` after measuring site `l` at `t = 0`.
///
/// # Safety
/// `handle` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn xywave_chain_conditional_dynamics(
    handle: *const XywaveChain,
    beta: f64,
    measured: usize,
    site: usize,
    t: f64,
    selective: i32,
    out: *mut f64,
) -> XywaveStatus {
    checked(
        guard(|| write(out, borrow(handle)?.0.conditional_dynamics(beta, measured, site, t, selective != 0)?)),
        handle.is_null() || out.is_null(),
    )
}
