//! Scalar special functions: gamma, Airy `Ai`, Mittag-Leffler and the damped
//! oscillation kernel `e^{x cos phi} sin(x sin phi)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::{integrate_breaks, Tolerance};

/// A truncated series with its error accounting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: usize,
    /// Bound on the omitted tail; at least the first omitted term.
    pub truncation_bound: f64,
    /// Bound on accumulated rounding, `eps * sum |term_k|` up to a small factor.
    pub rounding_bound: f64,
}

impl SeriesEval {
    pub fn error_bound(&self) -> f64 {
        self.truncation_bound + self.rounding_bound
    }
}

/// Compensated running sum that also tracks `sum |term|`.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, x: f64) {
        // Neumaier's variant keeps large-then-small cancellations exact
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub(crate) fn rounding_bound(&self) -> f64 {
        4.0 * f64::EPSILON * self.abs
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    // x is the shifted argument (Gamma(x + 1))
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Real gamma function.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Numeric("gamma of NaN".into()));
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x == x.floor() && (1.0..=171.0).contains(&x) {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    if x > 171.7 {
        return Ok(f64::INFINITY);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    // split the power to stay finite up to x ~ 171
    let half = t.powf(0.5 * (z + 0.5));
    Ok((2.0 * PI).sqrt() * half * half * (-t).exp() * lanczos_sum(z))
}

/// `ln |Gamma(x)|`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x < 0.5 {
        let s = (PI * x).sin().abs();
        return Ok(PI.ln() - s.ln() - ln_gamma(1.0 - x)?);
    }
    if x < 20.0 {
        return Ok(gamma(x)?.abs().ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    gamma(x).unwrap_or(f64::NAN)
}

/// `g(x, phi) = e^{x cos phi} sin(x sin phi)`.
pub fn osc_kernel(x: f64, phi: f64) -> f64 {
    (x * phi.cos()).exp() * (x * phi.sin()).sin()
}

/// `sum_k x^k sin(k phi) / k!`, the power series of [`osc_kernel`].
pub fn osc_kernel_series(x: f64, phi: f64, rel_tol: f64, max_terms: usize) -> SeriesEval {
    let mut sum = KahanSum::default();
    let mut power = 1.0; // x^k / k!
    let mut k = 0;
    loop {
        let term = power * (k as f64 * phi).sin();
        sum.add(term);
        k += 1;
        power *= x / k as f64;
        // tail of |x|^j/j! beyond k is below power / (1 - |x|/(k+1))
        let ratio = x.abs() / (k + 1) as f64;
        if ratio < 0.5 && power.abs() <= rel_tol * sum.value().abs().max(f64::MIN_POSITIVE) {
            return SeriesEval {
                value: sum.value(),
                terms_used: k,
                truncation_bound: power.abs() / (1.0 - ratio),
                rounding_bound: sum.rounding_bound(),
            };
        }
        if power == 0.0 || k >= max_terms {
            let tail = if ratio < 1.0 {
                power.abs() / (1.0 - ratio)
            } else {
                f64::INFINITY
            };
            return SeriesEval {
                value: sum.value(),
                terms_used: k,
                truncation_bound: tail,
                rounding_bound: sum.rounding_bound(),
            };
        }
    }
}

/// Largest `|w|` evaluated by the Maclaurin series of `Ai`.
pub const AIRY_SERIES_LIMIT: f64 = 6.0;
const AIRY_ASYMPTOTIC_NEG: f64 = 12.0;

/// `Ai(w)` for real `w`.
pub fn airy_ai(w: f64) -> f64 {
    airy_ai_pair(w).0
}

/// `(Ai(w), Ai'(w))`.
///
/// `|w| <= 6` sums the Maclaurin series; `w > 6` uses the exponentially
/// small asymptotic expansion; `-12 <= w < -6` integrates the Airy equation
/// by Taylor steps from the origin; `w < -12` uses the oscillatory asymptotic
/// expansion.
pub fn airy_ai_pair(w: f64) -> (f64, f64) {
    if w.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if w.abs() <= AIRY_SERIES_LIMIT {
        let s = airy_series(w, 1e-17);
        (s.0.value, s.1)
    } else if w > 0.0 {
        airy_asymptotic_positive(w)
    } else if w >= -AIRY_ASYMPTOTIC_NEG {
        airy_taylor_from_origin(w)
    } else {
        airy_asymptotic_negative(-w)
    }
}

/// The Maclaurin series
/// `Ai(w) = 3^{-2/3}/pi sum_k (3^{1/3} w)^k sin(2 pi (k+1)/3) Gamma((k+1)/3) / k!`.
pub fn airy_ai_series(w: f64, rel_tol: f64) -> SeriesEval {
    airy_series(w, rel_tol).0
}

fn airy_series(w: f64, rel_tol: f64) -> (SeriesEval, f64) {
    let c3 = 3f64.cbrt();
    let z = c3 * w;
    let z3 = z * z * z;
    // residue classes k = 0 and k = 1 (mod 3); k = 2 (mod 3) has sin(2 pi) = 0
    let s = (2.0 * PI / 3.0).sin();
    let mut t0 = s * gamma_unchecked(1.0 / 3.0); // k = 0
    let mut t1 = -s * gamma_unchecked(2.0 / 3.0) * z; // k = 1
    // derivative series: d/dw of z^k is k c3 z^{k-1}
    let mut d1 = -s * gamma_unchecked(2.0 / 3.0); // k = 1 term of sum k z^{k-1} ...
    let mut d0;
    let mut val = KahanSum::default();
    let mut der = KahanSum::default();
    val.add(t0);
    val.add(t1);
    der.add(d1);
    let mut k0 = 0usize;
    let mut k1 = 1usize;
    let mut terms = 2;
    let (truncation, _) = loop {
        // advance both classes by 3
        let r0 = z3 / (3.0 * ((k0 + 2) * (k0 + 3)) as f64);
        let r1 = z3 / (3.0 * ((k1 + 2) * (k1 + 3)) as f64);
        let nt0 = t0 * r0;
        let nt1 = t1 * r1;
        // derivative terms: k z^{k-1}/k! * c = term_k * k / z
        let nk0 = k0 + 3;
        let nk1 = k1 + 3;
        let nd0 = if z != 0.0 { nt0 * nk0 as f64 / z } else { 0.0 };
        let nd1 = if z != 0.0 {
            nt1 * nk1 as f64 / z
        } else {
            d1 * 0.0
        };
        let scale = val.value().abs().max(1e-300);
        let next_ratio = r0.abs().max(r1.abs());
        if next_ratio < 0.5 && nt0.abs() + nt1.abs() <= rel_tol * scale && terms > 4 {
            let tail = (nt0.abs() + nt1.abs()) / (1.0 - next_ratio);
            break (tail, ());
        }
        val.add(nt0);
        val.add(nt1);
        if nk0 == 3 && z == 0.0 {
            d0 = 0.0;
        } else {
            d0 = nd0;
        }
        d1 = nd1;
        der.add(d0);
        der.add(d1);
        t0 = nt0;
        t1 = nt1;
        k0 = nk0;
        k1 = nk1;
        terms += 2;
        if terms > 400 {
            break (f64::INFINITY, ());
        }
    };
    let pref = 3f64.powf(-2.0 / 3.0) / PI;
    let eval = SeriesEval {
        value: pref * val.value(),
        terms_used: terms,
        truncation_bound: pref * truncation,
        rounding_bound: pref * val.rounding_bound(),
    };
    let derivative = pref * c3 * der.value();
    (eval, derivative)
}

fn airy_u_coefficients(count: usize) -> Vec<f64> {
    let mut u = Vec::with_capacity(count);
    u.push(1.0);
    for k in 1..count {
        let kf = k as f64;
        let prev = u[k - 1];
        u.push(
            prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf),
        );
    }
    u
}

fn airy_asymptotic_positive(w: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * w.powf(1.5);
    let u = airy_u_coefficients(40);
    let mut sum_u = 0.0;
    let mut sum_v = 0.0;
    let mut prev = f64::INFINITY;
    let mut p = 1.0;
    for (k, &uk) in u.iter().enumerate() {
        let term = uk * p;
        if term.abs() > prev {
            break;
        }
        let kf = k as f64;
        let vk = if k == 0 {
            1.0
        } else {
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        };
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum_u += sign * term;
        sum_v += sign * vk * p;
        prev = term.abs();
        if term.abs() < 1e-17 * sum_u.abs() {
            break;
        }
        p /= zeta;
    }
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = w.powf(0.25);
    (e / q * sum_u, -e * q * sum_v)
}

fn airy_asymptotic_negative(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = airy_u_coefficients(40);
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut p = 1.0;
    let mut prev = f64::INFINITY;
    for (k, &uk) in u.iter().enumerate() {
        let term = uk * p;
        if term.abs() > prev {
            break;
        }
        let kf = k as f64;
        let vk = if k == 0 {
            1.0
        } else {
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk
        };
        // (-1)^{floor(k/2)} alternation within each of the even/odd sub-series
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pu += sign * term;
            pv += sign * vk * p;
        } else {
            qu += sign * term;
            qv += sign * vk * p;
        }
        prev = term.abs();
        if term.abs() < 1e-18 {
            break;
        }
        p /= zeta;
    }
    let phase = zeta - PI / 4.0;
    let (s, c) = phase.sin_cos();
    let q = z.powf(0.25);
    let ai = (c * pu + s * qu) / (PI.sqrt() * q);
    let aip = q / PI.sqrt() * (s * pv - c * qv);
    (ai, aip)
}

fn airy_taylor_from_origin(w: f64) -> (f64, f64) {
    let mut y = 3f64.powf(-2.0 / 3.0) / gamma_unchecked(2.0 / 3.0);
    let mut dy = -(3f64.powf(-1.0 / 3.0)) / gamma_unchecked(1.0 / 3.0);
    let steps = (w.abs() / 0.25).ceil() as usize;
    let h = w / steps as f64;
    let mut x0 = 0.0;
    let mut c = [0.0f64; 64];
    for _ in 0..steps {
        c[0] = y;
        c[1] = dy;
        c[2] = x0 * y / 2.0;
        let mut ny = c[0] + c[1] * h + c[2] * h * h;
        let mut ndy = c[1] + 2.0 * c[2] * h;
        let mut hp = h * h;
        for k in 1..61 {
            c[k + 2] = (x0 * c[k] + c[k - 1]) / (((k + 2) * (k + 1)) as f64);
            let term = c[k + 2] * hp * h;
            ny += term;
            ndy += (k + 2) as f64 * c[k + 2] * hp;
            hp *= h;
            if term.abs() < 1e-20 && k > 6 {
                break;
            }
        }
        y = ny;
        dy = ndy;
        x0 += h;
    }
    (y, dy)
}

/// Terms kept by the Mittag-Leffler series before giving up.
const ML_MAX_TERMS: usize = 3000;

/// Power series `E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta)` with
/// compensated summation.
pub fn mittag_leffler_series(alpha: f64, beta: f64, z: f64, rel_tol: f64) -> Result<SeriesEval> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "alpha/beta",
            value: alpha.min(beta),
            reason: "the direct series needs alpha > 0 and beta > 0",
        });
    }
    let mut sum = KahanSum::default();
    if z == 0.0 {
        let v = 1.0 / gamma(beta)?;
        return Ok(SeriesEval {
            value: v,
            terms_used: 1,
            truncation_bound: 0.0,
            rounding_bound: f64::EPSILON * v.abs(),
        });
    }
    let lz = z.abs().ln();
    let mut prev_mag = f64::INFINITY;
    for k in 0..ML_MAX_TERMS {
        let arg = alpha * k as f64 + beta;
        let mag = (k as f64 * lz - ln_gamma(arg)?).exp();
        let sign_gamma = if arg > 0.0 { 1.0 } else { gamma(arg)?.signum() };
        let sign = if z < 0.0 && k % 2 == 1 { -sign_gamma } else { sign_gamma };
        sum.add(sign * mag);
        // terms are eventually monotone; stop once past the peak and small
        if mag < prev_mag && mag <= rel_tol * sum.value().abs().max(1e-300) {
            let next_arg = arg + alpha;
            let next = ((k + 1) as f64 * lz - ln_gamma(next_arg)?).exp();
            let ratio = if mag > 0.0 { next / mag } else { 0.0 };
            if ratio < 0.9 {
                return Ok(SeriesEval {
                    value: sum.value(),
                    terms_used: k + 1,
                    truncation_bound: next / (1.0 - ratio),
                    rounding_bound: sum.rounding_bound(),
                });
            }
        }
        prev_mag = mag;
    }
    Err(Error::Range {
        what: "Mittag-Leffler series",
        bound: f64::INFINITY,
    })
}

/// `E_{alpha,beta}(z)`.
///
/// Sums the power series when its error bound certifies an absolute error of
/// `max(1e-10, 1e-13 |E|)`. For `beta = 1`, `0 < alpha < 1` and `z < 0` an
/// uncertified series is replaced by the complete-monotonicity integral
/// `E_alpha(-x) = sin(alpha pi)/(alpha pi) int_0^inf exp(-(u x)^{1/alpha}) du / (u^2 + 2u cos(alpha pi) + 1)`.
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    let series = mittag_leffler_series(alpha, beta, z, 1e-16);
    let target = |v: f64| 1e-10f64.max(1e-13 * v.abs());
    let bound = match series {
        Ok(s) if s.error_bound() <= target(s.value) => return Ok(s.value),
        Ok(s) => s.error_bound(),
        Err(Error::Range { bound, .. }) => bound,
        Err(e) => return Err(e),
    };
    if beta == 1.0 && alpha == 1.0 {
        return Ok(z.exp());
    }
    if beta == 1.0 && alpha > 0.0 && alpha < 1.0 && z < 0.0 {
        return mittag_leffler_negative_real(alpha, -z);
    }
    Err(Error::Range {
        what: "Mittag-Leffler series",
        bound,
    })
}

fn mittag_leffler_negative_real(alpha: f64, x: f64) -> Result<f64> {
    let c = (alpha * PI).cos();
    let upper = 60f64.powf(alpha) / x;
    let mut breaks = vec![0.0];
    if upper > 1.0 {
        breaks.push(1.0);
    }
    breaks.push(upper);
    let r = integrate_breaks(
        |u: f64| (-(u * x).powf(1.0 / alpha)).exp() / (u * u + 2.0 * u * c + 1.0),
        &breaks,
        Tolerance::new(1e-14, 1e-14),
    )
    .checked()?;
    Ok((alpha * PI).sin() / (alpha * PI) * r.value)
}

/// `E_{-alpha, 1-alpha}(w)`, defined only through the reflection identity
/// `-(1/x) E_{-alpha,1-alpha}(1/x) = E_{alpha,1}(x)`, i.e.
/// `E_{-alpha,1-alpha}(w) = -(1/w) E_{alpha,1}(1/w)`.
pub fn mittag_leffler_reflected(alpha: f64, w: f64) -> Result<f64> {
    if w == 0.0 {
        return Err(Error::InvalidParameter {
            name: "w",
            value: w,
            reason: "the reflected Mittag-Leffler function is defined for w != 0",
        });
    }
    Ok(-mittag_leffler(alpha, 1.0, 1.0 / w)? / w)
}
