//! Evaluators of the fundamental solutions `u_m(x, t)`.
//!
//! Every evaluator works in the similarity variable `z = x t^{-1/m}`, using
//! `u_m(x, t) = t^{-1/m} U_m(z)`. Odd orders follow the `(-1)^n` branch,
//! whose Fourier transform is `exp(-i t beta^m)`; even orders have
//! transform `exp(-t beta^m)`.
//!
//! Available routes:
//!
//! * odd series in powers of `z` (entire, but cancels for large `|z|`),
//! * damped-oscillation quadrature against the generalized gamma weight,
//! * a contour-deformed Fourier integral, stable for large negative `x`,
//! * the Airy closed form for `m = 3` and the biquadratic series for `m = 4`,
//! * a mollified Fourier-inversion oracle with Richardson extrapolation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::controls::NumericControls;
use crate::error::{check_time, Error, Result};
use crate::order::{EquationOrder, Parity};
use crate::quad::{integrate, integrate_breaks, sum_alternating, Tolerance};
use crate::special::{airy_ai, gamma, KahanSum};

/// Largest `|x| t^{-1/m}` accepted by the power series routes.
pub const SERIES_LIMIT: f64 = 8.0;

/// Largest admissible growth exponent of the damped integrand for negative
/// `x`: rounding is amplified by `exp(G)`, so `G` must leave room for the
/// requested absolute tolerance.
pub fn damped_growth_limit(controls: &NumericControls) -> f64 {
    (controls.quad_abs_tol / (64.0 * f64::EPSILON)).ln().max(1.0)
}

/// Mollifier strengths of the Fourier oracle.
pub const ORACLE_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelMethod {
    OddSeries,
    OddDamped,
    EvenDamped,
    FourierOracle,
    AiryClosed,
    BiquadraticSeries,
    /// Fourier integral along `[0, B]` then the ray `B + s e^{i pi/(2m)}`.
    FourierContour,
    /// Closed form at `x = 0`.
    Origin,
}

impl KernelMethod {
    pub fn name(&self) -> &'static str {
        match self {
            KernelMethod::OddSeries => "odd_series",
            KernelMethod::OddDamped => "odd_damped",
            KernelMethod::EvenDamped => "even_damped",
            KernelMethod::FourierOracle => "fourier_oracle",
            KernelMethod::AiryClosed => "airy_closed",
            KernelMethod::BiquadraticSeries => "biquadratic_series",
            KernelMethod::FourierContour => "fourier_contour",
            KernelMethod::Origin => "origin",
        }
    }

    pub fn supports(&self, order: EquationOrder) -> bool {
        match self {
            KernelMethod::OddSeries | KernelMethod::OddDamped | KernelMethod::FourierContour => {
                order.is_odd()
            }
            KernelMethod::EvenDamped => !order.is_odd(),
            KernelMethod::AiryClosed => order.m() == 3,
            KernelMethod::BiquadraticSeries => order.m() == 4,
            KernelMethod::FourierOracle | KernelMethod::Origin => true,
        }
    }
}

/// A kernel value with its error estimate and work count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub abs_err: f64,
    pub method: KernelMethod,
    /// Series terms or quadrature nodes used.
    pub nodes: usize,
}

fn odd_order(n: u32) -> Result<EquationOrder> {
    if n == 0 {
        return Err(Error::InvalidOrder(1));
    }
    EquationOrder::new(2 * n + 1)
}

fn even_order(n: u32) -> Result<EquationOrder> {
    if n == 0 {
        return Err(Error::InvalidOrder(0));
    }
    EquationOrder::new(2 * n)
}

/// Closed-form value at the origin:
/// odd `sin(n pi/m) Gamma(1 + 1/m) / (pi t^{1/m})`, even `Gamma(1 + 1/m) / (pi t^{1/m})`.
pub fn u_origin(order: EquationOrder, t: f64) -> Result<f64> {
    check_time(t)?;
    let m = order.m() as f64;
    let g = gamma(1.0 + 1.0 / m)?;
    let scale = t.powf(-1.0 / m) / PI;
    Ok(match order.parity() {
        Parity::Odd(n) => (n as f64 * PI / m).sin() * g * scale,
        Parity::Even(_) => g * scale,
    })
}

fn origin_value(order: EquationOrder, t: f64) -> Result<KernelValue> {
    Ok(KernelValue {
        value: u_origin(order, t)?,
        abs_err: 4.0 * f64::EPSILON,
        method: KernelMethod::Origin,
        nodes: 1,
    })
}

/// Odd-order power series
/// `u = -(1/(pi x)) sum_{k>=1} (-x t^{-1/m})^k sin(n pi k/m) Gamma(1 + k/m) / k!`,
/// summed with the `1/x` absorbed so that `x = 0` is the `k = 1` term.
pub fn u_odd_series(n: u32, x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    let order = odd_order(n)?;
    check_time(t)?;
    let m = order.m() as f64;
    let scale = t.powf(-1.0 / m);
    let z = x * scale;
    if z.abs() > SERIES_LIMIT {
        return Err(Error::MethodRange {
            method: "odd_series",
            scaled: z.abs(),
            limit: SERIES_LIMIT,
        });
    }
    let phase = n as f64 * PI / m;
    let mut sum = KahanSum::default();
    // p = (-z)^{k-1} / k!
    let mut p: f64 = 1.0;
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        sum.add(p * (phase * kf).sin() * gamma(1.0 + kf / m)?);
        let next_p = p * (-z) / (kf + 1.0);
        let next_env = next_p.abs() * gamma(1.0 + (kf + 1.0) / m)?;
        // Wendel: Gamma(1 + (j+1)/m)/Gamma(1 + j/m) <= (1 + j/m)^{1/m}
        let rho = z.abs() * (1.0 + (kf + 1.0) / m).powf(1.0 / m) / (kf + 2.0);
        let small = next_env <= controls.series_rel_tol * sum.value().abs()
            || next_env <= f64::EPSILON * sum.rounding_bound() / (4.0 * f64::EPSILON);
        if rho < 0.5 && small {
            let bound = next_env / (1.0 - rho);
            return Ok(KernelValue {
                value: scale / PI * sum.value(),
                abs_err: scale / PI * (bound + sum.rounding_bound()),
                method: KernelMethod::OddSeries,
                nodes: k,
            });
        }
        if k >= controls.series_max_terms {
            return Err(Error::Range {
                what: "odd-order series",
                bound: scale / PI * next_env,
            });
        }
        p = next_p;
        k += 1;
    }
}

/// `max_y (c y - y^m)` for `c >= 0`.
fn growth_exponent(c: f64, m: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let y = (c / m).powf(1.0 / (m - 1.0));
    c * y - y.powf(m)
}

/// Upper limit `Y` with `Y^m - c Y >= cutoff`.
fn damped_cutoff(cutoff: f64, c: f64, m: f64) -> f64 {
    let mut y = cutoff.powf(1.0 / m);
    for _ in 0..200 {
        let next = (cutoff + c.max(0.0) * y).powf(1.0 / m);
        if (next - y).abs() <= 1e-12 * y {
            return next;
        }
        y = next;
    }
    y
}

fn uniform_breaks(a: f64, b: f64, pieces: usize) -> Vec<f64> {
    let pieces = pieces.max(1);
    (0..=pieces)
        .map(|i| a + (b - a) * i as f64 / pieces as f64)
        .collect()
}

/// Damped-oscillation form of the odd solution,
/// `(m t / (pi x)) int_0^inf e^{-b_n x w} sin(a_n x w) w^{m-1} e^{-t w^m} dw`,
/// i.e. `E[e^{-b x G} sin(a x G)] / (pi x)` with `G` generalized gamma.
pub fn u_odd_damped(n: u32, x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    let order = odd_order(n)?;
    check_time(t)?;
    if x == 0.0 {
        return origin_value(order, t);
    }
    let (a, b, _) = order.constants();
    let mf = order.m() as f64;
    let scale = t.powf(-1.0 / mf);
    let z = x * scale;
    let growth = growth_exponent(-b * z, mf);
    let growth_limit = damped_growth_limit(controls);
    if growth > growth_limit {
        return Err(Error::MethodRange {
            method: "odd_damped",
            scaled: z.abs(),
            limit: damped_limit(b, mf, growth_limit),
        });
    }
    let upper = damped_cutoff(controls.quad_cutoff_decades, -b * z, mf);
    let pieces = ((a * z.abs() * upper / PI).ceil() as usize).max(4);
    let breaks = uniform_breaks(0.0, upper, pieces);
    let integrand = |y: f64| {
        let ym1 = y.powf(mf - 1.0);
        (-b * z * y - y * ym1).exp() * (a * z * y).sin() / z * ym1
    };
    let target = controls.quad_abs_tol * PI / (mf * scale);
    let r = integrate_breaks(integrand, &breaks, Tolerance::new(target, 1e-13)).checked()?;
    let pref = scale * mf / PI;
    Ok(KernelValue {
        value: pref * r.value,
        abs_err: pref * r.abs_err + pref * (-controls.quad_cutoff_decades).exp(),
        method: KernelMethod::OddDamped,
        nodes: r.evals,
    })
}

fn damped_limit(b: f64, m: f64, growth_limit: f64) -> f64 {
    // |z| where the growth exponent reaches the limit
    let (mut lo, mut hi) = (0.0, 1e6);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if growth_exponent(b * mid, m) > growth_limit {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Odd solution by Fourier inversion along a deformed contour:
/// `(1/pi) Re int e^{i(beta x + t beta^m)} d beta` over `[0, B]` and then the
/// ray `B + s e^{i pi/(2m)}`, on which the integrand decays like `e^{-t s^m}`.
pub fn u_odd_contour(n: u32, x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    let order = odd_order(n)?;
    check_time(t)?;
    let mf = order.m() as f64;
    let scale = t.powf(-1.0 / mf);
    let z = x * scale;
    let b_turn = (2.0 * z.abs() / mf).powf(1.0 / (mf - 1.0)) + 1.0;
    let target = controls.quad_abs_tol * PI / scale;
    // real segment, split so each piece spans at most ~pi of phase
    let max_slope = z.abs().max(mf * b_turn.powf(mf - 1.0) + z);
    let pieces = ((b_turn * max_slope / PI).ceil() as usize).max(2);
    let seg = integrate_breaks(
        |y: f64| (z * y + y.powf(mf)).cos(),
        &uniform_breaks(0.0, b_turn, pieces),
        Tolerance::new(0.5 * target, 1e-14).with_max_intervals(20 * pieces + 200),
    )
    .checked()?;
    let dir = Complex64::from_polar(1.0, PI / (2.0 * mf));
    let s_max = (controls.quad_cutoff_decades + 5.0).powf(1.0 / mf);
    let ray_phase = z.abs() + mf * b_turn.powf(mf - 1.0);
    let ray_pieces = ((s_max * ray_phase / PI).ceil() as usize).clamp(2, 100_000);
    let ray = integrate_breaks(
        |s: f64| {
            let beta = b_turn + dir * s;
            (Complex64::i() * (beta * z + beta.powf(mf))).exp() * dir
        },
        &uniform_breaks(0.0, s_max, ray_pieces),
        Tolerance::new(0.5 * target, 1e-14).with_max_intervals(20 * ray_pieces + 200),
    )
    .checked()?;
    let value = scale / PI * (seg.value + ray.value.re);
    Ok(KernelValue {
        value,
        abs_err: scale / PI * (seg.abs_err + ray.abs_err),
        method: KernelMethod::FourierContour,
        nodes: seg.evals + ray.evals,
    })
}

/// Even-order damped form
/// `(2n t / (pi x)) int_0^inf beta^{2n-1} e^{-t beta^{2n}} sin(beta x) d beta`,
/// i.e. `E[sin(x G)] / (pi x)`.
pub fn u_even_damped(n: u32, x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    let order = even_order(n)?;
    check_time(t)?;
    if x == 0.0 {
        return origin_value(order, t);
    }
    let mf = order.m() as f64;
    let scale = t.powf(-1.0 / mf);
    let z = x * scale;
    let upper = controls.quad_cutoff_decades.powf(1.0 / mf);
    let pieces = ((z.abs() * upper / PI).ceil() as usize).max(4);
    let integrand = |y: f64| {
        let ym1 = y.powf(mf - 1.0);
        ym1 * (-y * ym1).exp() * (z * y).sin() / z
    };
    let target = controls.quad_abs_tol * PI / (mf * scale);
    let r = integrate_breaks(
        integrand,
        &uniform_breaks(0.0, upper, pieces),
        Tolerance::new(target, 1e-13),
    )
    .checked()?;
    let pref = scale * mf / PI;
    Ok(KernelValue {
        value: pref * r.value,
        abs_err: pref * r.abs_err + pref * (-controls.quad_cutoff_decades).exp(),
        method: KernelMethod::EvenDamped,
        nodes: r.evals,
    })
}

/// Break points on `[0, upper]` such that `y^m + z y` changes by about `pi`
/// between neighbours.
fn phase_breaks(z: f64, m: f64, upper: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut y = 0.0;
    while y < upper {
        let slope = (m * y.powf(m - 1.0) + z).abs();
        let ahead = (m * (y + 0.5).min(upper).powf(m - 1.0) + z).abs();
        let step = (PI / slope.max(ahead).max(1e-3)).min(0.5);
        y = (y + step).min(upper);
        breaks.push(y);
    }
    breaks
}

fn oracle_mollified(z: f64, m: f64, eps: f64, cutoff: f64) -> Result<(f64, f64, usize)> {
    let upper = (cutoff / eps).powf(1.0 / m);
    let breaks = phase_breaks(z, m, upper);
    let r = integrate_breaks(
        |y: f64| {
            let ym = y.powf(m);
            (z * y + ym).cos() * (-eps * ym).exp()
        },
        &breaks,
        Tolerance::new(1e-11, 1e-13).with_max_intervals(4 * breaks.len() + 1000),
    )
    .checked()?;
    Ok((r.value / PI, r.abs_err / PI, r.evals))
}

/// Fourier-inversion oracle.
///
/// Even orders integrate `(1/pi) int_0^inf e^{-t beta^m} cos(beta x) d beta`
/// directly. Odd orders damp `(1/pi) int_0^inf cos(beta x + t beta^m) d beta`
/// with `exp(-eps t beta^m)` for the strengths in [`ORACLE_EPSILONS`] and
/// extrapolate to `eps = 0` by two Richardson steps.
pub fn u_fourier_oracle(order: EquationOrder, x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    check_time(t)?;
    let mf = order.m() as f64;
    let scale = t.powf(-1.0 / mf);
    let z = x * scale;
    if !order.is_odd() {
        let upper = (controls.quad_cutoff_decades + 10.0).powf(1.0 / mf);
        let pieces = ((z.abs() * upper / PI).ceil() as usize).max(4);
        let r = integrate_breaks(
            |y: f64| (-y.powf(mf)).exp() * (z * y).cos(),
            &uniform_breaks(0.0, upper, pieces),
            Tolerance::new(1e-13, 1e-13),
        )
        .checked()?;
        return Ok(KernelValue {
            value: scale / PI * r.value,
            abs_err: scale / PI * r.abs_err,
            method: KernelMethod::FourierOracle,
            nodes: r.evals,
        });
    }
    let z = if order.is_mirrored() { -z } else { z };
    let mut values = [0.0; 3];
    let mut quad_err = 0.0;
    let mut nodes = 0;
    for (slot, &eps) in values.iter_mut().zip(ORACLE_EPSILONS.iter()) {
        let (v, e, evals) = oracle_mollified(z, mf, eps, controls.quad_cutoff_decades)?;
        *slot = v;
        quad_err += e;
        nodes += evals;
    }
    let r1 = 2.0 * values[1] - values[0];
    let r2 = 2.0 * values[2] - values[1];
    let limit = (4.0 * r2 - r1) / 3.0;
    let spread = (limit - r2).abs();
    if !limit.is_finite() || spread > 1e-3 {
        return Err(Error::OracleFailure { spread });
    }
    Ok(KernelValue {
        value: scale * limit,
        abs_err: scale * (spread + quad_err),
        method: KernelMethod::FourierOracle,
        nodes,
    })
}

/// `u_3(x, t) = (3t)^{-1/3} Ai(x (3t)^{-1/3})`.
pub fn u3_airy(x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let s = (3.0 * t).cbrt();
    Ok(airy_ai(x / s) / s)
}

/// Biquadratic series.
///
/// The series
/// `(2 pi sqrt(2 tau^{1/2}))^{-1} sum_k (-1)^k/(2k)! (-sqrt(2)|x|/tau^{1/4})^{2k} Gamma(k/2 + 1/4)`
/// solves `du/dtau = -(1/4) d^4u/dx^4`; it is evaluated at `tau = 4t` so the
/// result solves `du/dt = -d^4u/dx^4` like every other even evaluator here.
pub fn u4_series(x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    check_time(t)?;
    let tau = 4.0 * t;
    let q = tau.powf(0.25);
    let z = x.abs() / t.powf(0.25);
    if z > SERIES_LIMIT {
        return Err(Error::MethodRange {
            method: "biquadratic_series",
            scaled: z,
            limit: SERIES_LIMIT,
        });
    }
    // w = (sqrt(2)|x|/tau^{1/4})^2, term_k = (-1)^k w^k Gamma(k/2 + 1/4) / (2k)!
    let w = 2.0 * x * x / (q * q);
    let mut sum = KahanSum::default();
    let mut p: f64 = 1.0; // w^k / (2k)!
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * p * gamma(0.5 * kf + 0.25)?);
        let next_p = p * w / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
        let next_env = next_p * gamma(0.5 * (kf + 1.0) + 0.25)?;
        // Gamma(x + 1/2)/Gamma(x) <= sqrt(x)
        let rho = w * (0.5 * (kf + 1.0) + 0.25).sqrt() / ((2.0 * kf + 3.0) * (2.0 * kf + 4.0));
        let small = next_env <= controls.series_rel_tol * sum.value().abs()
            || next_env <= sum.rounding_bound();
        if rho < 0.5 && small {
            let pref = 1.0 / (2.0 * PI * (2.0 * tau.sqrt()).sqrt());
            return Ok(KernelValue {
                value: pref * sum.value(),
                abs_err: pref * (next_env / (1.0 - rho) + sum.rounding_bound()),
                method: KernelMethod::BiquadraticSeries,
                nodes: k + 1,
            });
        }
        if k >= controls.series_max_terms {
            return Err(Error::Range {
                what: "biquadratic series",
                bound: next_env,
            });
        }
        p = next_p;
        k += 1;
    }
}

/// `f_j(x, t) = (x/t)^j (3t)^{-1/3} Ai(x (3t)^{-1/3})`.
pub fn f_m_eval(exponent: u32, x: f64, t: f64) -> Result<f64> {
    let base = u3_airy(x, t)?;
    Ok((x / t).powi(exponent as i32) * base)
}

/// Best available value of `u_m(x, t)` for the unmirrored equation.
///
/// `m = 3` uses the Airy form, `m = 4` the biquadratic series near the
/// origin; other odd orders use the series up to [`SERIES_LIMIT`], then the
/// damped form while it is well conditioned, then the contour integral;
/// other even orders use the damped form.
pub fn u_auto(order: EquationOrder, x: f64, t: f64, controls: &NumericControls) -> Result<KernelValue> {
    check_time(t)?;
    let x = if order.is_mirrored() { -x } else { x };
    let mf = order.m() as f64;
    let z = x * t.powf(-1.0 / mf);
    match order.parity() {
        Parity::Odd(1) => Ok(KernelValue {
            value: u3_airy(x, t)?,
            abs_err: 1e-13 * t.powf(-1.0 / 3.0),
            method: KernelMethod::AiryClosed,
            nodes: 1,
        }),
        Parity::Odd(n) => {
            if z.abs() <= SERIES_LIMIT {
                u_odd_series(n, x, t, controls)
            } else {
                match u_odd_damped(n, x, t, controls) {
                    Err(Error::MethodRange { .. }) => u_odd_contour(n, x, t, controls),
                    other => other,
                }
            }
        }
        Parity::Even(2) if z.abs() <= SERIES_LIMIT => u4_series(x, t, controls),
        Parity::Even(n) => u_even_damped(n, x, t, controls),
    }
}

/// Result of a half-line mass computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassResult {
    pub value: f64,
    pub abs_err: f64,
    /// Upper end of the integration range.
    pub upper: f64,
    /// Whether `|u|` fell below the tail threshold before the range cap.
    pub tail_converged: bool,
}

/// `int_0^inf u_m(x, t) dx`, which equals `(1 - 1/m)/2` for odd and `1/2`
/// for even orders.
pub fn mass_positive_halfline(order: EquationOrder, t: f64, controls: &NumericControls) -> Result<MassResult> {
    check_time(t)?;
    let mf = order.m() as f64;
    let scale = t.powf(1.0 / mf);
    let eval = |x: f64| u_auto(order, x, t, controls).map(|v| v.value);
    let tail = 1e-13 / scale;
    let step = 2.0 * scale;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut lo = 0.0;
    let mut quiet = 0;
    let mut failure = None;
    for _ in 0..200 {
        let hi = lo + step;
        let mut peak = 0.0f64;
        let r = integrate(
            |x: f64| match eval(x) {
                Ok(v) => {
                    peak = peak.max(v.abs());
                    v
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            lo,
            hi,
            Tolerance::new(1e-12, 1e-12),
        );
        if let Some(e) = failure.take() {
            return Err(e);
        }
        total += r.value;
        err += r.abs_err;
        lo = hi;
        if peak < tail {
            quiet += 1;
            if quiet >= 2 {
                return Ok(MassResult {
                    value: total,
                    abs_err: err + peak * step,
                    upper: hi,
                    tail_converged: true,
                });
            }
        } else {
            quiet = 0;
        }
    }
    Ok(MassResult {
        value: total,
        abs_err: err,
        upper: lo,
        tail_converged: false,
    })
}

/// `int_{-inf}^{inf} u_m(x, t) dx`. Odd orders sum the oscillating negative
/// tail over half-periods of its asymptotic phase with Wynn acceleration.
pub fn total_mass(order: EquationOrder, t: f64, controls: &NumericControls) -> Result<f64> {
    let positive = mass_positive_halfline(order, t, controls)?;
    if !order.is_odd() {
        return Ok(2.0 * positive.value);
    }
    let mf = order.m() as f64;
    let scale = t.powf(1.0 / mf);
    // asymptotic phase (m-1)(|z|/m)^{m/(m-1)} in the similarity variable
    let phase_at = |zabs: f64| (mf - 1.0) * (zabs / mf).powf(mf / (mf - 1.0));
    let z_of_phase = |phi: f64| mf * (phi / (mf - 1.0)).powf((mf - 1.0) / mf);
    let z0 = 2.0;
    let phi0 = phase_at(z0);
    let eval = |x: f64| u_auto(order, x, t, controls).map(|v| v.value);
    let mut failure: Option<Error> = None;
    let mut piece = |lo: f64, hi: f64| -> Result<f64> {
        let r = integrate(
            |x: f64| match eval(x) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            },
            lo,
            hi,
            Tolerance::new(1e-13, 1e-12),
        );
        match failure.take() {
            Some(e) => Err(e),
            None => Ok(r.value),
        }
    };
    let core = piece(-z0 * scale, 0.0)?;
    let (tail, _) = sum_alternating(
        |k| {
            let inner = z_of_phase(phi0 + k as f64 * PI) * scale;
            let outer = z_of_phase(phi0 + (k + 1) as f64 * PI) * scale;
            piece(-outer, -inner)
        },
        8,
        400,
        1e-10,
    )?;
    Ok(positive.value + core + tail)
}

/// Finite-difference weights for the `deriv`-th derivative at `center` over
/// the nodes `points` (Fornberg's recursion).
pub fn fd_weights(deriv: usize, center: f64, points: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut c = vec![vec![0.0; deriv + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = points[0] - center;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(deriv);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = points[i] - center;
        for j in 0..i {
            let c3 = points[i] - points[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[deriv]).collect()
}

/// Second-order central stencil offsets for a derivative of order `deriv`:
/// 3 points for orders 1-2, 5 for 3-4, 7 for 5-6, and so on.
pub fn central_offsets(deriv: usize) -> Vec<i32> {
    let half = deriv.div_ceil(2) as i32;
    (-half..=half).collect()
}

fn central_derivative<F>(f: &F, deriv: usize, at: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let offsets = central_offsets(deriv);
    let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64).collect();
    let weights = fd_weights(deriv, 0.0, &nodes);
    let mut acc = 0.0;
    for (w, &o) in weights.iter().zip(&offsets) {
        acc += w * f(at + o as f64 * h)?;
    }
    let d = acc / h.powi(deriv as i32);
    if !d.is_finite() {
        return Err(Error::Numeric(format!(
            "finite-difference stencil overflow (order {deriv}, h = {h:e})"
        )));
    }
    Ok(d)
}

/// `|d_t f - kappa_m d_x^m f|` at `(x, t)` with second-order central
/// differences: step `h` in `x` and in `t`.
pub fn pde_residual<F>(order: EquationOrder, field: F, x: f64, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    pde_residual_steps(order, field, x, t, h, h)
}

/// [`pde_residual`] with separate steps in space and time.
pub fn pde_residual_steps<F>(order: EquationOrder, field: F, x: f64, t: f64, hx: f64, ht: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    if !(hx > 0.0 && ht > 0.0) || ht >= t {
        return Err(Error::InvalidParameter {
            name: "h",
            value: hx.min(ht),
            reason: "steps must be positive and the time step smaller than t",
        });
    }
    let dt = central_derivative(&|s| field(x, s), 1, t, ht)?;
    let dx = central_derivative(&|y| field(y, t), order.m() as usize, x, hx)?;
    Ok((dt - order.kappa() * dx).abs())
}

/// Step balancing `h^2` truncation against `eps / h^m` rounding, in units
/// of the natural length `t^{1/m}`.
pub fn suggested_step(order: EquationOrder, t: f64) -> f64 {
    let m = order.m() as f64;
    f64::EPSILON.powf(1.0 / (m + 2.0)) * t.powf(1.0 / m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn controls() -> NumericControls {
        NumericControls::default()
    }

    #[test]
    fn origin_values() {
        let u3 = u_origin(EquationOrder::new(3).unwrap(), 1.0).unwrap();
        assert!((u3 - 0.246162703873882770978584791722).abs() < 1e-15);
        let u2 = u_origin(EquationOrder::new(2).unwrap(), 1.0).unwrap();
        assert!((u2 - 0.5 / PI.sqrt()).abs() < 1e-15);
        let u4 = u_origin(EquationOrder::new(4).unwrap(), 1.0).unwrap();
        assert!((u4 - 0.288516869308234844309799262676).abs() < 1e-15);
    }

    #[test]
    fn origin_tends_to_inverse_pi() {
        let mut prev_odd = 0.0;
        let mut prev_even = 0.0;
        for n in 1..=50 {
            let odd = u_origin(EquationOrder::new(2 * n + 1).unwrap(), 1.0).unwrap();
            let even = u_origin(EquationOrder::new(2 * n).unwrap(), 1.0).unwrap();
            assert!(odd > prev_odd && even > prev_even, "n={n}");
            assert!(odd < 1.0 / PI && even < 1.0 / PI);
            prev_odd = odd;
            prev_even = even;
        }
        assert!((1.0 / PI - prev_odd).abs() < 0.01);
    }

    #[test]
    fn odd_series_origin_and_scaling() {
        let v = u_odd_series(1, 0.0, 8.0, &controls()).unwrap();
        assert!((v.value - 0.246162703873882770978584791722 / 2.0).abs() < 1e-14);
        assert_eq!(v.nodes, 1);
    }

    #[test]
    fn odd_series_matches_airy() {
        for &x in &[-2.0, -1.0, 0.5, 2.0] {
            let s = u_odd_series(1, x, 1.0, &controls()).unwrap();
            let a = u3_airy(x, 1.0).unwrap();
            assert!((s.value - a).abs() < 1e-9, "x={x}");
            assert!(s.abs_err < 1e-10);
        }
    }

    #[test]
    fn odd_series_refuses_large_arguments() {
        let e = u_odd_series(1, -9.0, 1.0, &controls()).unwrap_err();
        assert!(matches!(e, Error::MethodRange { .. }));
        assert!(matches!(
            u_odd_series(1, 1.0, 0.0, &controls()),
            Err(Error::InvalidTime(_))
        ));
        assert!(u_odd_series(0, 1.0, 1.0, &controls()).is_err());
    }

    #[test]
    fn odd_reference_values() {
        // contour-rotated Fourier integrals evaluated at 30 digits
        let cases = [
            (2, 1.0, 1.0, 0.178429181901087008889620901884),
            (2, -2.0, 1.0, 0.25511605469191972613295412206),
            (3, 0.7, 1.0, 0.232144243820931200390190247659),
            (3, -1.5, 1.0, 0.277894753635988438883026467878),
            (2, -3.0, 0.5, -0.00755467126997722117784531387188),
        ];
        for (n, x, t, expect) in cases {
            let s = u_odd_series(n, x, t, &controls()).unwrap().value;
            let d = u_odd_damped(n, x, t, &controls()).unwrap().value;
            let c = u_odd_contour(n, x, t, &controls()).unwrap().value;
            assert!((s - expect).abs() < 1e-11, "series n={n} x={x}: {s}");
            assert!((d - expect).abs() < 1e-9, "damped n={n} x={x}: {d}");
            assert!((c - expect).abs() < 1e-9, "contour n={n} x={x}: {c}");
        }
    }

    #[test]
    fn damped_third_order_matches_airy() {
        let v = u_odd_damped(1, 1.0, 1.0, &controls()).unwrap();
        let exact = 0.132079826568834196855195970109;
        assert!((v.value - exact).abs() < 1e-10);
        let origin = u_odd_damped(1, 0.0, 1.0, &controls()).unwrap();
        assert_eq!(origin.method, KernelMethod::Origin);
        assert!((origin.value - 0.246162703873882770978584791722).abs() < 1e-15);
    }

    #[test]
    fn damped_refuses_ill_conditioned_points() {
        let e = u_odd_damped(2, -200.0, 1.0, &controls()).unwrap_err();
        assert!(matches!(e, Error::MethodRange { .. }));
        // the contour route takes over
        let c = u_odd_contour(2, -200.0, 1.0, &controls()).unwrap();
        assert!(c.value.abs() < 0.2);
        let via_auto = u_auto(EquationOrder::new(5).unwrap(), -200.0, 1.0, &controls()).unwrap();
        assert_eq!(via_auto.method, KernelMethod::FourierContour);
    }

    #[test]
    fn contour_matches_airy_far_out() {
        for &x in &[-40.0, -12.0, 6.0, 15.0] {
            let c = u_odd_contour(1, x, 1.0, &controls()).unwrap();
            let a = u3_airy(x, 1.0).unwrap();
            assert!((c.value - a).abs() < 1e-10, "x={x}: {} vs {a}", c.value);
        }
    }

    #[test]
    fn even_damped_reductions() {
        for &x in &[0.0, 1.0, 2.0] {
            let g = (-x * x / 4.0f64).exp() / (4.0 * PI).sqrt();
            let v = u_even_damped(1, x, 1.0, &controls()).unwrap();
            assert!((v.value - g).abs() < 1e-10, "x={x}");
        }
        let cases = [
            (2, 1.0, 0.242665094564103720686786491191),
            (2, 2.5, 0.0794785977917073361491183528139),
            (3, 1.0, 0.250714399463654327903327374796),
        ];
        for (n, x, expect) in cases {
            let v = u_even_damped(n, x, 1.0, &controls()).unwrap();
            assert!((v.value - expect).abs() < 1e-10, "n={n} x={x}");
        }
    }

    #[test]
    fn biquadratic_series_against_quadrature() {
        let c = controls();
        let origin = u4_series(0.0, 1.0, &c).unwrap();
        assert!((origin.value - gamma(1.25).unwrap() / PI).abs() < 1e-14);
        assert!((origin.value - gamma(0.25).unwrap() / (4.0 * PI)).abs() < 1e-14);
        for i in 0..=30 {
            let x = -3.0 + 0.2 * i as f64;
            let s = u4_series(x, 1.0, &c).unwrap().value;
            let d = u_even_damped(2, x, 1.0, &c).unwrap().value;
            assert!((s - d).abs() < 1e-10, "x={x}");
            assert_eq!(s, u4_series(-x, 1.0, &c).unwrap().value);
        }
        assert!(matches!(u4_series(9.0, 1.0, &c), Err(Error::MethodRange { .. })));
    }

    #[test]
    fn fourier_oracle_values() {
        let c = controls();
        let gauss = u_fourier_oracle(EquationOrder::new(2).unwrap(), 1.0, 1.0, &c).unwrap();
        assert!((gauss.value - (-0.25f64).exp() / (4.0 * PI).sqrt()).abs() < 1e-10);
        let airy = u_fourier_oracle(EquationOrder::new(3).unwrap(), 0.0, 1.0 / 3.0, &c).unwrap();
        assert!((airy.value - 0.355028053887817239260063186004).abs() < 1e-6);
        let quartic = u_fourier_oracle(EquationOrder::new(4).unwrap(), 0.0, 1.0, &c).unwrap();
        assert!((quartic.value - gamma(1.25).unwrap() / PI).abs() < 1e-10);
        let odd5 = u_fourier_oracle(EquationOrder::new(5).unwrap(), -2.0, 1.0, &c).unwrap();
        assert!((odd5.value - 0.25511605469191972613295412206).abs() < 1e-6);
    }

    #[test]
    fn mirrored_oracle_reflects() {
        let c = controls();
        let order = EquationOrder::new(3).unwrap();
        let plain = u_fourier_oracle(order, 1.0, 1.0, &c).unwrap().value;
        let mirror = u_fourier_oracle(order.mirrored(), -1.0, 1.0, &c).unwrap().value;
        assert!((plain - mirror).abs() < 1e-12);
    }

    #[test]
    fn fornberg_weights() {
        let w = fd_weights(3, 0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let expect = [-0.5, 1.0, 0.0, -1.0, 0.5];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let w = fd_weights(5, 0.0, &[-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        let expect = [-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-13);
        }
        assert_eq!(central_offsets(3).len(), 5);
        assert_eq!(central_offsets(5).len(), 7);
        assert_eq!(central_offsets(2).len(), 3);
    }

    #[test]
    fn residual_of_solutions() {
        let o3 = EquationOrder::new(3).unwrap();
        let r = pde_residual(o3, u3_airy, 0.5, 1.0, 1e-2).unwrap();
        assert!(r < 1e-4, "u3 residual {r}");
        let r = pde_residual(o3, |x, t| f_m_eval(1, x, t), 1.0, 1.0, 1e-2).unwrap();
        assert!(r < 1e-3, "f1 residual {r}");
        let o2 = EquationOrder::new(2).unwrap();
        let gauss = |x: f64, t: f64| Ok((-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt());
        let r = pde_residual(o2, gauss, 0.7, 1.0, 2e-4).unwrap();
        assert!(r < 1e-8, "gaussian residual {r}");
        // a non-solution has an O(1) residual
        let r = pde_residual(o3, gauss, 0.5, 1.0, 1e-2).unwrap();
        assert!(r > 1e-2);
        assert!(pde_residual(o3, u3_airy, 0.5, 1.0, 2.0).is_err());
    }

    #[test]
    fn f_m_degenerate_cases() {
        assert_eq!(f_m_eval(0, 0.4, 1.3).unwrap(), u3_airy(0.4, 1.3).unwrap());
        assert_eq!(f_m_eval(1, 0.0, 1.0).unwrap(), 0.0);
        let v = f_m_eval(1, 1.0, 1.0).unwrap();
        assert!((v - 0.132079826568834196855195970109).abs() < 1e-13);
    }

    #[test]
    fn method_support() {
        let o3 = EquationOrder::new(3).unwrap();
        let o4 = EquationOrder::new(4).unwrap();
        assert!(KernelMethod::AiryClosed.supports(o3));
        assert!(!KernelMethod::AiryClosed.supports(EquationOrder::new(5).unwrap()));
        assert!(!KernelMethod::EvenDamped.supports(o3));
        assert!(KernelMethod::BiquadraticSeries.supports(o4));
        assert!(!KernelMethod::OddSeries.supports(o4));
    }

    #[test]
    fn half_line_masses() {
        let c = controls();
        for (m, expect) in [(3, 1.0 / 3.0), (5, 0.4), (7, 3.0 / 7.0), (4, 0.5)] {
            for &t in &[0.5, 1.0, 2.0] {
                let r = mass_positive_halfline(EquationOrder::new(m).unwrap(), t, &c).unwrap();
                assert!(r.tail_converged);
                assert!((r.value - expect).abs() < 1e-8, "m={m} t={t}: {}", r.value);
            }
        }
    }

    #[test]
    fn total_mass_is_one() {
        let c = controls();
        for m in [2, 3, 4, 5] {
            let total = total_mass(EquationOrder::new(m).unwrap(), 1.0, &c).unwrap();
            assert!((total - 1.0).abs() < 1e-6, "m={m}: {total}");
        }
    }
}
