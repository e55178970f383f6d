//! C ABI over the staggered-field chain library.
//!
//! The surface is a single opaque handle holding a field point and an
//! evaluation mode, plus flat `extern "C"` functions that write results
//! through out-pointers and report a [`PtStatus`].  Every entry point
//! catches panics, so no unwinding ever crosses the boundary.  The header
//! `include/ptising.h` is regenerated by the build script when cbindgen is
//! available.

use ptising::model::FieldPoint;
use ptising::phase::PhaseLabel;
use ptising::spectrum::Mode;
use ptising::{berry, phase, response, spectrum, PtError};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Bump on any breaking change to this C surface.
pub const ABI_VERSION: u32 = 1;

/// Result codes for all entry points.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtStatus {
    Ok = 0,
    InvalidArgument = 1,
    Gapless = 2,
    Degenerate = 3,
    Nonconvergence = 4,
    SizeCap = 5,
    Io = 6,
    NullPointer = 7,
    InternalPanic = 8,
}

fn status_of(err: &PtError) -> PtStatus {
    match err {
        PtError::InvalidArgument(_) | PtError::Config(_) | PtError::EmptyGrid => {
            PtStatus::InvalidArgument
        }
        PtError::Gapless { .. } => PtStatus::Gapless,
        PtError::DegenerateDenominator { .. } => PtStatus::Degenerate,
        PtError::NonConvergence(_) | PtError::GaugeFailure(_) => PtStatus::Nonconvergence,
        PtError::SizeCap { .. } => PtStatus::SizeCap,
        PtError::Io(_) => PtStatus::Io,
    }
}

/// Opaque model handle: one field point plus the evaluation mode used by
/// the ensemble quantities.
pub struct PtIsingModel {
    point: FieldPoint,
    mode: Mode,
}

fn guarded(f: impl FnOnce() -> PtStatus) -> PtStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(PtStatus::InternalPanic)
}

/// Write a complex value through a pair of out-pointers, either of which
/// may be null when the caller does not need that part.
unsafe fn write_pair(re: *mut f64, im: *mut f64, value: num_complex_like::Complex) -> PtStatus {
    if !re.is_null() {
        *re = value.0;
    }
    if !im.is_null() {
        *im = value.1;
    }
    PtStatus::Ok
}

/// Tiny local stand-in so the header does not depend on num-complex.
mod num_complex_like {
    pub struct Complex(pub f64, pub f64);
}

fn split(z: num_complex::Complex64) -> num_complex_like::Complex {
    num_complex_like::Complex(z.re, z.im)
}

use ptising::num_complex;

/// ABI revision of this library.
#[no_mangle]
pub extern "C" fn ptising_abi_version() -> u32 {
    ABI_VERSION
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ptising_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static human-readable message for a status code.
#[no_mangle]
pub extern "C" fn ptising_status_message(status: PtStatus) -> *const c_char {
    let text: &'static str = match status {
        PtStatus::Ok => "ok\0",
        PtStatus::InvalidArgument => "invalid argument\0",
        PtStatus::Gapless => "band gap closes at this field point\0",
        PtStatus::Degenerate => "degenerate denominator in eigenvector normalization\0",
        PtStatus::Nonconvergence => "iteration failed to converge\0",
        PtStatus::SizeCap => "problem size exceeds the configured cap\0",
        PtStatus::Io => "i/o failure\0",
        PtStatus::NullPointer => "null pointer argument\0",
        PtStatus::InternalPanic => "internal panic\0",
    };
    text.as_ptr() as *const c_char
}

/// Allocate a model handle at the given field point.  `coupling` is the
/// Ising J and must be finite and positive.  The new handle starts in the
/// thermodynamic-limit mode.  On success writes the handle through `out`.
///
/// # Safety
/// `out` must be a valid pointer to a `PtIsingModel*` slot.
#[no_mangle]
pub unsafe extern "C" fn ptising_model_new(
    eta: f64,
    xi: f64,
    coupling: f64,
    out: *mut *mut PtIsingModel,
) -> PtStatus {
    if out.is_null() {
        return PtStatus::NullPointer;
    }
    guarded(|| match FieldPoint::with_coupling(eta, xi, coupling) {
        Ok(point) => {
            let handle = Box::new(PtIsingModel {
                point,
                mode: Mode::Thermodynamic,
            });
            *out = Box::into_raw(handle);
            PtStatus::Ok
        }
        Err(e) => {
            *out = std::ptr::null_mut();
            status_of(&e)
        }
    })
}

/// Release a handle.  Passing null is a no-op.
///
/// # Safety
/// `model` must have come from `ptising_model_new` and not been freed.
#[no_mangle]
pub unsafe extern "C" fn ptising_model_free(model: *mut PtIsingModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Evaluate ensemble quantities on a finite periodic ring with `sites`
/// sites (even, at least 4).
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptising_model_set_mode_sites(
    model: *mut PtIsingModel,
    sites: usize,
) -> PtStatus {
    let Some(m) = model.as_mut() else {
        return PtStatus::NullPointer;
    };
    guarded(|| {
        if sites < 4 || sites % 2 != 0 {
            return PtStatus::InvalidArgument;
        }
        m.mode = Mode::FiniteN { two_n: sites };
        PtStatus::Ok
    })
}

/// Evaluate ensemble quantities in the thermodynamic limit (the default).
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ptising_model_set_mode_thermodynamic(
    model: *mut PtIsingModel,
) -> PtStatus {
    let Some(m) = model.as_mut() else {
        return PtStatus::NullPointer;
    };
    m.mode = Mode::Thermodynamic;
    PtStatus::Ok
}

/// Dispersion branch `branch` (1..=6) at momentum `k`.
///
/// # Safety
/// `model` must be a live handle; `re`/`im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_dispersion(
    model: *const PtIsingModel,
    branch: usize,
    k: f64,
    re: *mut f64,
    im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match ptising::dispersion(branch, k, &m.point) {
        Ok(z) => write_pair(re, im, split(z)),
        Err(e) => status_of(&e),
    })
}

/// Bottom of the first band over the Brillouin zone.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ptising_eps1_at_zero(
    model: *const PtIsingModel,
    out: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    if out.is_null() {
        return PtStatus::NullPointer;
    }
    guarded(|| {
        *out = spectrum::eps1_at_zero(&m.point);
        PtStatus::Ok
    })
}

/// Ground-state energy per site in the handle's mode.
///
/// # Safety
/// `model` must be a live handle; `re`/`im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_energy_density(
    model: *const PtIsingModel,
    re: *mut f64,
    im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match spectrum::energy_density(&m.point, m.mode) {
        Ok(z) => write_pair(re, im, split(z)),
        Err(e) => status_of(&e),
    })
}

/// First derivatives of the energy density with respect to (eta, xi).
///
/// # Safety
/// `model` must be a live handle; any out-pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_gradient(
    model: *const PtIsingModel,
    d_eta_re: *mut f64,
    d_eta_im: *mut f64,
    d_xi_re: *mut f64,
    d_xi_im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match response::gradient(&m.point, m.mode) {
        Ok((de, dx)) => {
            write_pair(d_eta_re, d_eta_im, split(de));
            write_pair(d_xi_re, d_xi_im, split(dx))
        }
        Err(e) => status_of(&e),
    })
}

/// Field-space Laplacian of the energy density.
///
/// # Safety
/// `model` must be a live handle; `re`/`im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_laplacian(
    model: *const PtIsingModel,
    re: *mut f64,
    im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match response::laplacian(&m.point, m.mode) {
        Ok(z) => write_pair(re, im, split(z)),
        Err(e) => status_of(&e),
    })
}

/// Staggered sublattice magnetizations.
///
/// # Safety
/// `model` must be a live handle; any out-pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_magnetizations(
    model: *const PtIsingModel,
    m_a_re: *mut f64,
    m_a_im: *mut f64,
    m_b_re: *mut f64,
    m_b_im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match response::magnetizations(&m.point, m.mode) {
        Ok((ma, mb)) => {
            write_pair(m_a_re, m_a_im, split(ma));
            write_pair(m_b_re, m_b_im, split(mb))
        }
        Err(e) => status_of(&e),
    })
}

/// Berry curvature density for the sum-type parameter loop.
///
/// # Safety
/// `model` must be a live handle; `re`/`im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_berry_sum(
    model: *const PtIsingModel,
    re: *mut f64,
    im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match berry::curvature_preset_sum(&m.point, m.mode) {
        Ok(z) => write_pair(re, im, split(z)),
        Err(e) => status_of(&e),
    })
}

/// Berry curvature density for the difference-type parameter loop.
///
/// # Safety
/// `model` must be a live handle; `re`/`im` may each be null.
#[no_mangle]
pub unsafe extern "C" fn ptising_berry_diff(
    model: *const PtIsingModel,
    re: *mut f64,
    im: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    guarded(|| match berry::curvature_preset_diff(&m.point, m.mode) {
        Ok(z) => write_pair(re, im, split(z)),
        Err(e) => status_of(&e),
    })
}

/// Phase labels written by `ptising_classify`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtPhase {
    ParamagnetI = 0,
    FerromagnetII = 1,
    ParamagnetIII = 2,
    Boundary = 3,
}

/// Classify the phase at the handle's field point with boundary tolerance
/// `tol`.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ptising_classify(
    model: *const PtIsingModel,
    tol: f64,
    out: *mut PtPhase,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    if out.is_null() {
        return PtStatus::NullPointer;
    }
    guarded(|| match phase::classify(&m.point, tol) {
        Ok(label) => {
            *out = match label {
                PhaseLabel::ParamagnetI => PtPhase::ParamagnetI,
                PhaseLabel::FerromagnetII => PtPhase::FerromagnetII,
                PhaseLabel::ParamagnetIII => PtPhase::ParamagnetIII,
                PhaseLabel::Boundary => PtPhase::Boundary,
            };
            PtStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Euclidean distance from the handle's field point to the nearest phase
/// boundary.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ptising_boundary_distance(
    model: *const PtIsingModel,
    out: *mut f64,
) -> PtStatus {
    let Some(m) = model.as_ref() else {
        return PtStatus::NullPointer;
    };
    if out.is_null() {
        return PtStatus::NullPointer;
    }
    guarded(|| {
        *out = phase::boundary_distance(&m.point);
        PtStatus::Ok
    })
}
