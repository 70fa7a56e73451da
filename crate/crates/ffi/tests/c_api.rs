use std::ffi::CStr;
use std::ptr;

use pseudoheat_ffi::*;

#[test]
fn eval_matches_closed_forms() {
    let mut v = 0.0;
    let mut err = -1.0;
    let st = unsafe { ph_eval(ptr::null(), 2, false, PhMethod::Auto, 1.0, 1.0, &mut v, &mut err) };
    assert_eq!(st, PhStatus::Ok);
    // Gaussian kernel exp(-x^2/4t)/sqrt(4 pi t) at x = t = 1.
    assert!((v - 0.21969564473386122).abs() < 1e-12);
    assert!(err >= 0.0);

    let st = unsafe { ph_eval(ptr::null(), 3, false, PhMethod::Airy, 0.0, 1.0, &mut v, ptr::null_mut()) };
    assert_eq!(st, PhStatus::Ok);
    assert!((v - 0.2461627038738).abs() < 1e-12);

    let mut w = 0.0;
    let st = unsafe { ph_eval(ptr::null(), 3, true, PhMethod::Airy, 0.7, 1.0, &mut w, ptr::null_mut()) };
    assert_eq!(st, PhStatus::Ok);
    unsafe { ph_eval(ptr::null(), 3, false, PhMethod::Airy, -0.7, 1.0, &mut v, ptr::null_mut()) };
    assert_eq!(v, w);
}

#[test]
fn errors_are_reported_and_outputs_untouched() {
    let mut v = 123.0;
    let st = unsafe { ph_eval(ptr::null(), 1, false, PhMethod::Auto, 0.0, 1.0, &mut v, ptr::null_mut()) };
    assert_eq!(st, PhStatus::InvalidOrder);
    let st = unsafe { ph_eval(ptr::null(), 3, false, PhMethod::Auto, 0.0, 0.0, &mut v, ptr::null_mut()) };
    assert_eq!(st, PhStatus::InvalidTime);
    let st = unsafe { ph_eval(ptr::null(), 4, false, PhMethod::Airy, 0.0, 1.0, &mut v, ptr::null_mut()) };
    assert_eq!(st, PhStatus::MethodMismatch);
    let st = unsafe { ph_eval(ptr::null(), 5, false, PhMethod::Series, -20.0, 1.0, &mut v, ptr::null_mut()) };
    assert_eq!(st, PhStatus::MethodRange);
    let st = unsafe { ph_eval(ptr::null(), 4, true, PhMethod::Auto, 0.0, 1.0, &mut v, ptr::null_mut()) };
    assert_eq!(st, PhStatus::InvalidParameter);
    assert_eq!(v, 123.0);
    let st = unsafe { ph_eval(ptr::null(), 3, false, PhMethod::Auto, 0.0, 1.0, ptr::null_mut(), ptr::null_mut()) };
    assert_eq!(st, PhStatus::NullPointer);
    let st = unsafe { ph_gamma(-2.0, &mut v) };
    assert_eq!(st, PhStatus::Pole);
    let msg = unsafe { CStr::from_ptr(ph_status_message(st)) };
    assert_eq!(msg.to_str().unwrap(), "gamma function pole");
}

#[test]
fn controls_handle_round_trip() {
    let c = ph_controls_new();
    assert!(!c.is_null());
    unsafe {
        assert_eq!(ph_controls_set_tolerance(c, 1e-10), PhStatus::Ok);
        assert_eq!(ph_controls_set_tolerance(c, -1.0), PhStatus::InvalidParameter);
        assert_eq!(ph_controls_set_max_terms(c, 0), PhStatus::InvalidParameter);
        let mut v = 0.0;
        assert_eq!(ph_eval(c, 5, false, PhMethod::Series, 0.5, 1.0, &mut v, ptr::null_mut()), PhStatus::Ok);
        let mut d = 0.0;
        assert_eq!(ph_eval(c, 5, false, PhMethod::Damped, 0.5, 1.0, &mut d, ptr::null_mut()), PhStatus::Ok);
        assert!((v - d).abs() < 1e-9);
        ph_controls_free(c);
        ph_controls_free(ptr::null_mut());
        assert_eq!(ph_controls_set_tolerance(ptr::null_mut(), 1e-8), PhStatus::NullPointer);
    }
}

#[test]
fn special_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(ph_airy_ai(0.0, &mut v), PhStatus::Ok);
        assert!((v - 0.3550280538878172).abs() < 1e-14);
        assert_eq!(ph_gamma(0.5, &mut v), PhStatus::Ok);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert_eq!(ph_mittag_leffler(1.0, 1.0, -1.0, &mut v), PhStatus::Ok);
        assert!((v - (-1.0f64).exp()).abs() < 1e-13);
        // q_{1/2}(x, 1) is the half-normal density exp(-x^2/4)/sqrt(pi).
        assert_eq!(ph_q_alpha(0.5, 1.0, 1.0, &mut v), PhStatus::Ok);
        assert!((v - (-0.25f64).exp() / std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert_eq!(ph_q_alpha(1.5, 1.0, 1.0, &mut v), PhStatus::InvalidParameter);
    }
}

#[test]
fn characteristic_functions() {
    let (mut re, mut im) = (0.0, 0.0);
    unsafe {
        assert_eq!(ph_zn_cf(1, 1.0, 2.0, &mut re, &mut im), PhStatus::Ok);
    }
    // Z_1(t) is Cauchy with location -t/2 and scale t sqrt(3)/2.
    let amp = (-3f64.sqrt()).exp();
    assert!((re - amp * 1f64.cos()).abs() < 1e-14);
    assert!((im + amp * 1f64.sin()).abs() < 1e-14);
    unsafe {
        assert_eq!(ph_stable_cf(1.0, -1.0 / 3.0, 1.0, 2.0, &mut re, &mut im), PhStatus::Ok);
    }
    assert!((re - amp * 1f64.cos()).abs() < 1e-14);
    unsafe {
        assert_eq!(ph_zn_cf(0, 1.0, 2.0, &mut re, &mut im), PhStatus::InvalidParameter);
        assert_eq!(ph_zn_cf(1, 1.0, 2.0, ptr::null_mut(), &mut im), PhStatus::NullPointer);
    }
}

#[test]
fn samplers_are_deterministic() {
    let draw = |seed| {
        let s = ph_sampler_new(seed);
        let mut buf = vec![0.0; 64];
        let st = unsafe { ph_sample_subordinator(s, 0.5, 1.0, buf.len(), buf.as_mut_ptr()) };
        unsafe { ph_sampler_free(s) };
        assert_eq!(st, PhStatus::Ok);
        buf
    };
    assert_eq!(draw(7), draw(7));
    assert_ne!(draw(7), draw(8));
    assert!(draw(7).iter().all(|&v| v > 0.0));

    let s = ph_sampler_new(1);
    let mut buf = [0.0; 16];
    unsafe {
        assert_eq!(ph_sample_zn(s, 2, 1.0, 16, buf.as_mut_ptr()), PhStatus::Ok);
        assert_eq!(ph_sample_gen_gamma(s, 3.0, 1.0, 16, buf.as_mut_ptr()), PhStatus::Ok);
        assert!(buf.iter().all(|&v| v > 0.0));
        assert_eq!(ph_sample_gen_gamma(s, -1.0, 1.0, 16, buf.as_mut_ptr()), PhStatus::InvalidParameter);
        assert_eq!(ph_sample_zn(s, 1, 1.0, 16, ptr::null_mut()), PhStatus::NullPointer);
        ph_sampler_free(s);
    }
}

#[test]
fn header_declares_the_interface() {
    let header = include_str!("../include/pseudoheat.h");
    for name in [
        "typedef struct PhControls PhControls;",
        "typedef struct PhSampler PhSampler;",
        "PH_STATUS_METHOD_RANGE = 7",
        "ph_status_message",
        "ph_eval(",
        "ph_airy_ai(",
        "ph_mittag_leffler(",
        "ph_zn_cf(",
        "ph_sample_subordinator(",
        "ph_q_alpha(",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(ph_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
