//! C interface to `pseudoheat`.
//!
//! Every fallible call returns a [`PhStatus`] and writes results through
//! out-pointers, which are left untouched on failure. Settings and random
//! streams live behind opaque handles that the caller frees. A null
//! `PhControls` pointer means default settings.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use pseudoheat::eval::evaluate_point;
use pseudoheat::fractional::q_alpha_density;
use pseudoheat::special::{airy_ai, gamma, mittag_leffler};
use pseudoheat::stable::{
    sample_gen_gamma, sample_skewed_stable, sample_zn, stable_cf, zn_cf, CompositionSpec, Sampler,
};
use pseudoheat::{EquationOrder, Error, GenGammaLaw, Method, NumericControls, StableLaw};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidOrder = 2,
    InvalidTime = 3,
    InvalidParameter = 4,
    Pole = 5,
    Range = 6,
    MethodRange = 7,
    MethodMismatch = 8,
    OracleFailure = 9,
    Quadrature = 10,
    Numeric = 11,
    NonFinite = 12,
    Panic = 13,
}

impl From<&Error> for PhStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidOrder(_) => PhStatus::InvalidOrder,
            Error::InvalidTime(_) => PhStatus::InvalidTime,
            Error::InvalidParameter { .. } => PhStatus::InvalidParameter,
            Error::Pole(_) => PhStatus::Pole,
            Error::Range { .. } => PhStatus::Range,
            Error::MethodRange { .. } => PhStatus::MethodRange,
            Error::MethodMismatch { .. } => PhStatus::MethodMismatch,
            Error::OracleFailure { .. } => PhStatus::OracleFailure,
            Error::Quadrature { .. } => PhStatus::Quadrature,
            Error::Numeric(_) => PhStatus::Numeric,
            Error::NonFinite { .. } => PhStatus::NonFinite,
        }
    }
}

/// Evaluation method for [`ph_eval`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhMethod {
    Auto = 0,
    Series = 1,
    Damped = 2,
    Fourier = 3,
    Airy = 4,
    Contour = 5,
}

impl From<PhMethod> for Method {
    fn from(m: PhMethod) -> Self {
        match m {
            PhMethod::Auto => Method::Auto,
            PhMethod::Series => Method::Series,
            PhMethod::Damped => Method::Damped,
            PhMethod::Fourier => Method::Fourier,
            PhMethod::Airy => Method::Airy,
            PhMethod::Contour => Method::Contour,
        }
    }
}

/// Opaque numeric settings.
pub struct PhControls {
    inner: NumericControls,
}

/// Opaque seeded random stream.
pub struct PhSampler {
    inner: Sampler,
}

fn guard<F: FnOnce() -> Result<(), PhStatus>>(f: F) -> PhStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PhStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => PhStatus::Panic,
    }
}

fn status(e: Error) -> PhStatus {
    PhStatus::from(&e)
}

unsafe fn controls_or_default(c: *const PhControls) -> NumericControls {
    if c.is_null() {
        NumericControls::default()
    } else {
        (*c).inner
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), PhStatus> {
    if out.is_null() {
        return Err(PhStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Static, NUL-terminated description of `status`. Never null.
#[no_mangle]
pub extern "C" fn ph_status_message(status: PhStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        PhStatus::Ok => c"ok",
        PhStatus::NullPointer => c"a required pointer argument was null",
        PhStatus::InvalidOrder => c"invalid equation order (m must be at least 2)",
        PhStatus::InvalidTime => c"invalid time (t must be positive and finite)",
        PhStatus::InvalidParameter => c"invalid parameter",
        PhStatus::Pole => c"gamma function pole",
        PhStatus::Range => c"series could not be certified at this argument",
        PhStatus::MethodRange => c"method is outside its range at this argument",
        PhStatus::MethodMismatch => c"method does not apply to this order",
        PhStatus::OracleFailure => c"Fourier oracle did not converge",
        PhStatus::Quadrature => c"quadrature did not reach tolerance",
        PhStatus::Numeric => c"numerical failure",
        PhStatus::NonFinite => c"non-finite result",
        PhStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ph_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New settings with default values. Free with [`ph_controls_free`].
#[no_mangle]
pub extern "C" fn ph_controls_new() -> *mut PhControls {
    Box::into_raw(Box::new(PhControls {
        inner: NumericControls::default(),
    }))
}

/// # Safety
/// `controls` must come from [`ph_controls_new`] and not be freed already, or be null.
#[no_mangle]
pub unsafe extern "C" fn ph_controls_free(controls: *mut PhControls) {
    if !controls.is_null() {
        drop(Box::from_raw(controls));
    }
}

/// Sets both the series relative tolerance and the quadrature absolute tolerance.
///
/// # Safety
/// `controls` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ph_controls_set_tolerance(controls: *mut PhControls, tol: f64) -> PhStatus {
    guard(|| {
        let c = controls.as_mut().ok_or(PhStatus::NullPointer)?;
        let mut next = c.inner;
        next.series_rel_tol = tol;
        next.quad_abs_tol = tol;
        next.validate().map_err(status)?;
        c.inner = next;
        Ok(())
    })
}

/// # Safety
/// `controls` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ph_controls_set_max_terms(controls: *mut PhControls, terms: usize) -> PhStatus {
    guard(|| {
        let c = controls.as_mut().ok_or(PhStatus::NullPointer)?;
        let mut next = c.inner;
        next.series_max_terms = terms;
        next.validate().map_err(status)?;
        c.inner = next;
        Ok(())
    })
}

/// Fundamental solution `u_m(x, t)`. `mirrored` selects the opposite sign of
/// an odd-order equation. `out_abs_err` may be null.
///
/// # Safety
/// `controls` must be null or a live handle; `out_value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_eval(
    controls: *const PhControls,
    m: u32,
    mirrored: bool,
    method: PhMethod,
    x: f64,
    t: f64,
    out_value: *mut f64,
    out_abs_err: *mut f64,
) -> PhStatus {
    guard(|| {
        if out_value.is_null() {
            return Err(PhStatus::NullPointer);
        }
        let c = controls_or_default(controls);
        let mut order = EquationOrder::new(m).map_err(status)?;
        if mirrored {
            if !order.is_odd() {
                return Err(PhStatus::InvalidParameter);
            }
            order = order.mirrored();
        }
        let v = evaluate_point(order, method.into(), x, t, &c).map_err(status)?;
        write(out_value, v.value)?;
        if !out_abs_err.is_null() {
            out_abs_err.write(v.abs_err);
        }
        Ok(())
    })
}

/// Airy function `Ai(w)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_airy_ai(w: f64, out: *mut f64) -> PhStatus {
    guard(|| {
        if !w.is_finite() {
            return Err(PhStatus::InvalidParameter);
        }
        write(out, airy_ai(w))
    })
}

/// Gamma function.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_gamma(x: f64, out: *mut f64) -> PhStatus {
    guard(|| write(out, gamma(x).map_err(status)?))
}

/// Two-parameter Mittag-Leffler function `E_{alpha,beta}(z)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_mittag_leffler(alpha: f64, beta: f64, z: f64, out: *mut f64) -> PhStatus {
    guard(|| write(out, mittag_leffler(alpha, beta, z).map_err(status)?))
}

/// Characteristic function of the stable law with index `alpha`, skewness
/// parameter `nu` and time `t`, at `beta`.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_stable_cf(
    alpha: f64,
    nu: f64,
    t: f64,
    beta: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PhStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(PhStatus::NullPointer);
        }
        let law = StableLaw::new(alpha, nu, t).map_err(status)?;
        let v = stable_cf(&law, beta);
        write(out_re, v.re)?;
        write(out_im, v.im)
    })
}

/// Characteristic function of the depth-`depth` composition `Z_depth(t)` at `beta`.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_zn_cf(depth: u32, t: f64, beta: f64, out_re: *mut f64, out_im: *mut f64) -> PhStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(PhStatus::NullPointer);
        }
        let spec = CompositionSpec::new(depth, t).map_err(status)?;
        let v = zn_cf(&spec, beta);
        write(out_re, v.re)?;
        write(out_im, v.im)
    })
}

/// Density of the time-fractional solution `q_alpha(x, t)`, `0 < alpha < 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ph_q_alpha(alpha: f64, x: f64, t: f64, out: *mut f64) -> PhStatus {
    guard(|| write(out, q_alpha_density(alpha, x, t).map_err(status)?))
}

/// New random stream seeded with `seed`. Free with [`ph_sampler_free`].
#[no_mangle]
pub extern "C" fn ph_sampler_new(seed: u64) -> *mut PhSampler {
    Box::into_raw(Box::new(PhSampler {
        inner: Sampler::new(seed),
    }))
}

/// # Safety
/// `sampler` must come from [`ph_sampler_new`] and not be freed already, or be null.
#[no_mangle]
pub unsafe extern "C" fn ph_sampler_free(sampler: *mut PhSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

unsafe fn fill(
    sampler: *mut PhSampler,
    out: *mut f64,
    count: usize,
    draw: impl FnOnce(&mut Sampler) -> pseudoheat::Result<Vec<f64>>,
) -> PhStatus {
    guard(|| {
        let s = sampler.as_mut().ok_or(PhStatus::NullPointer)?;
        if out.is_null() {
            return Err(PhStatus::NullPointer);
        }
        let values = draw(&mut s.inner).map_err(status)?;
        debug_assert_eq!(values.len(), count);
        std::slice::from_raw_parts_mut(out, count).copy_from_slice(&values);
        Ok(())
    })
}

/// Draws `count` values of the positive stable subordinator `T_alpha(t)` into `out`.
///
/// # Safety
/// `sampler` must be a live handle and `out` must hold `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn ph_sample_subordinator(
    sampler: *mut PhSampler,
    alpha: f64,
    t: f64,
    count: usize,
    out: *mut f64,
) -> PhStatus {
    fill(sampler, out, count, |s| Ok(sample_skewed_stable(alpha, t, count, s)?.values))
}

/// Draws `count` values of `Z_depth(t)` into `out`.
///
/// # Safety
/// `sampler` must be a live handle and `out` must hold `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn ph_sample_zn(sampler: *mut PhSampler, depth: u32, t: f64, count: usize, out: *mut f64) -> PhStatus {
    fill(sampler, out, count, |s| {
        let spec = CompositionSpec::new(depth, t)?;
        Ok(sample_zn(&spec, count, s)?.values)
    })
}

/// Draws `count` values of the generalized gamma law with shape `gamma` at time `t`.
///
/// # Safety
/// `sampler` must be a live handle and `out` must hold `count` doubles.
#[no_mangle]
pub unsafe extern "C" fn ph_sample_gen_gamma(
    sampler: *mut PhSampler,
    gamma: f64,
    t: f64,
    count: usize,
    out: *mut f64,
) -> PhStatus {
    fill(sampler, out, count, |s| {
        let law = GenGammaLaw::new(gamma, t)?;
        Ok(sample_gen_gamma(&law, count, s)?.values)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_status_has_a_message() {
        use PhStatus::*;
        let all = [
            Ok, NullPointer, InvalidOrder, InvalidTime, InvalidParameter, Pole, Range, MethodRange,
            MethodMismatch, OracleFailure, Quadrature, Numeric, NonFinite, Panic,
        ];
        for s in all {
            let msg = unsafe { CStr::from_ptr(ph_status_message(s)) };
            assert!(!msg.to_bytes().is_empty());
        }
    }

    #[test]
    fn error_mapping_follows_kind() {
        assert_eq!(status(Error::InvalidTime(-1.0)), PhStatus::InvalidTime);
        assert_eq!(
            status(Error::MethodRange { method: "series", scaled: 9.0, limit: 8.0 }),
            PhStatus::MethodRange
        );
    }
}
