//! Fractional diffusion layer: the density `q_alpha` of the folded solution
//! of `d^alpha u/dt^alpha + du/dx = 0`, the Wright-function solution of the
//! time-fractional diffusion equation, their Laplace transforms and a Caputo
//! residual check.
//!
//! Both densities are scalings of the M-Wright function
//! `M_alpha(z) = (1/pi) sum_r (-z)^r Gamma(alpha(r+1)) sin(pi alpha(r+1)) / r!`,
//! the density of `E^{1-alpha} / A(phi)^{1-alpha}` in Kanter's representation.
//! Near the origin the series is used; once its cancellation can no longer be
//! certified the Kanter integral takes over.

use std::f64::consts::PI;

use crate::error::{check_time, Error, Result};
use crate::quad::{integrate, Tolerance};
use crate::special::{gamma, ln_gamma, mittag_leffler, KahanSum, SeriesEval};

/// How a fractional density value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracMethod {
    Series,
    KanterIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracValue {
    pub value: f64,
    pub abs_err: f64,
    pub method: FracMethod,
}

/// Folded fractional law `X(t)` with density `q_alpha(., t)` on `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracLaw {
    alpha: f64,
    t: f64,
}

impl FracLaw {
    pub fn new(alpha: f64, t: f64) -> Result<Self> {
        check_alpha(alpha)?;
        check_time(t)?;
        Ok(Self { alpha, t })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        q_alpha_density(self.alpha, x, self.t)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        q_alpha_cdf(self.alpha, x, self.t)
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "fractional order must lie in (0, 1)",
        })
    }
}

/// Series for `M_alpha(z)`, `z >= 0`, with truncation and rounding bounds.
///
/// Term magnitudes are formed in log space, so the sum itself never
/// overflows; for large `z` its rounding bound simply becomes useless.
pub fn m_wright_series(alpha: f64, z: f64) -> Result<SeriesEval> {
    if z == 0.0 {
        let v = gamma(alpha)? * (PI * alpha).sin() / PI;
        return Ok(SeriesEval {
            value: v,
            terms_used: 1,
            truncation_bound: 0.0,
            rounding_bound: f64::EPSILON * v.abs(),
        });
    }
    let lz = z.ln();
    let magnitude = |r: f64| -> Result<f64> {
        Ok((r * lz - ln_gamma(r + 1.0)? + ln_gamma(alpha * (r + 1.0))?).exp())
    };
    let mut sum = KahanSum::default();
    for r in 0..5000usize {
        let rf = r as f64;
        let a = alpha * (rf + 1.0);
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * magnitude(rf)? * (PI * a).sin());
        let next_env = magnitude(rf + 1.0)?;
        // Wendel: Gamma(y + alpha)/Gamma(y) <= y^alpha
        let rho = z * (a + alpha).powf(alpha) / (rf + 2.0);
        if rho < 0.5 && (next_env <= 1e-16 * sum.value().abs() || next_env <= sum.rounding_bound()) {
            return Ok(SeriesEval {
                value: sum.value() / PI,
                terms_used: r + 1,
                truncation_bound: next_env / (1.0 - rho) / PI,
                rounding_bound: sum.rounding_bound() / PI,
            });
        }
    }
    Err(Error::Range {
        what: "M-Wright series",
        bound: f64::INFINITY,
    })
}

/// Kanter's function `A(phi) = sin(alpha phi)^{alpha/(1-alpha)} sin((1-alpha) phi) / sin(phi)^{1/(1-alpha)}`.
fn kanter_a(alpha: f64, phi: f64) -> f64 {
    let beta = 1.0 - alpha;
    (alpha * phi).sin().powf(alpha / beta) * (beta * phi).sin() / phi.sin().powf(1.0 / beta)
}

fn kanter_integral(alpha: f64, z: f64, density: bool) -> Result<(f64, f64)> {
    let beta = 1.0 - alpha;
    let s = z.powf(1.0 / beta);
    let r = integrate(
        |phi: f64| {
            let a = kanter_a(alpha, phi);
            if !a.is_finite() {
                return 0.0;
            }
            let e = (-a * s).exp();
            if density {
                if e == 0.0 {
                    0.0
                } else {
                    a * e
                }
            } else {
                e
            }
        },
        0.0,
        PI,
        Tolerance::new(1e-300, 1e-12).with_max_intervals(2000),
    );
    // relative accuracy is requested; absolute accuracy at rounding level
    // is accepted for values that are negligible anyway
    if !r.converged && !(r.abs_err <= 1e-15) {
        return Err(Error::Quadrature {
            estimate: r.abs_err,
            evals: r.evals,
        });
    }
    if density {
        let scale = z.powf(alpha / beta) / (beta * PI);
        Ok((scale * r.value, scale * r.abs_err))
    } else {
        Ok((r.value / PI, r.abs_err / PI))
    }
}

/// `M_alpha(z)` for `z >= 0`: certified series, else Kanter's integral.
pub fn m_wright(alpha: f64, z: f64) -> Result<FracValue> {
    check_alpha(alpha)?;
    if !(z >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "the M-Wright density is evaluated on z >= 0",
        });
    }
    if let Ok(s) = m_wright_series(alpha, z) {
        if s.error_bound() <= 1e-13 + 1e-11 * s.value.abs() {
            return Ok(FracValue {
                value: s.value,
                abs_err: s.error_bound(),
                method: FracMethod::Series,
            });
        }
    }
    if z == 0.0 {
        return Err(Error::Range {
            what: "M-Wright series",
            bound: f64::INFINITY,
        });
    }
    let (value, abs_err) = kanter_integral(alpha, z, true)?;
    Ok(FracValue {
        value,
        abs_err,
        method: FracMethod::KanterIntegral,
    })
}

/// Plain series value of `q_alpha(x, t)` with its bounds; errors when the
/// bounds exceed `1e-8 (1 + |q|) t^{-alpha}`.
pub fn q_alpha_series(alpha: f64, x: f64, t: f64) -> Result<SeriesEval> {
    check_alpha(alpha)?;
    check_time(t)?;
    let scale = t.powf(-alpha);
    let s = m_wright_series(alpha, x.abs() * scale)?;
    let out = SeriesEval {
        value: scale * s.value,
        truncation_bound: scale * s.truncation_bound,
        rounding_bound: scale * s.rounding_bound,
        terms_used: s.terms_used,
    };
    if out.error_bound() > 1e-8 * (scale + out.value.abs()) {
        return Err(Error::Range {
            what: "q_alpha series",
            bound: out.error_bound(),
        });
    }
    Ok(out)
}

/// `q_alpha(x, t) = t^{-alpha} M_alpha(x / t^alpha)` with error estimate.
pub fn q_alpha_value(alpha: f64, x: f64, t: f64) -> Result<FracValue> {
    check_time(t)?;
    if x < 0.0 {
        return Ok(FracValue {
            value: 0.0,
            abs_err: 0.0,
            method: FracMethod::Series,
        });
    }
    let scale = t.powf(-alpha);
    let v = m_wright(alpha, x * scale)?;
    Ok(FracValue {
        value: scale * v.value,
        abs_err: scale * v.abs_err,
        method: v.method,
    })
}

/// Density of the folded fractional law at `x > 0` (zero for `x < 0`).
pub fn q_alpha_density(alpha: f64, x: f64, t: f64) -> Result<f64> {
    q_alpha_value(alpha, x, t).map(|v| v.value)
}

/// `P(X(t) <= x)`, from Kanter's representation of the tail.
pub fn q_alpha_cdf(alpha: f64, x: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_time(t)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let (tail, _) = kanter_integral(alpha, x * t.powf(-alpha), false)?;
    Ok(1.0 - tail)
}

/// Solution of `d^nu u/dt^nu = lambda^2 d^2u/dx^2`,
/// `u = (1/(2 pi lambda t^{nu/2})) sum_k (-|x|/(lambda t^{nu/2}))^k Gamma(nu(1+k)/2) sin(pi nu(1+k)/2) / k!`.
///
/// `nu = 2` (the wave equation, point masses at `+-lambda t`) has no density
/// and is rejected.
pub fn wright_fractional_density(nu: f64, lambda_scale: f64, x: f64, t: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 2.0) {
        return Err(Error::InvalidParameter {
            name: "nu",
            value: nu,
            reason: "a density exists only for nu in (0, 2)",
        });
    }
    if !(lambda_scale > 0.0 && lambda_scale.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda_scale,
            reason: "scale must be positive",
        });
    }
    check_time(t)?;
    let width = lambda_scale * t.powf(0.5 * nu);
    let m = m_wright(0.5 * nu, x.abs() / width)?;
    Ok(m.value / (2.0 * width))
}

/// `int_0^inf e^{-lambda x} q_alpha(x, t) dx = E_{alpha,1}(-lambda t^alpha)`; `alpha = 1` allowed.
pub fn laplace_x_q(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "fractional order must lie in (0, 1]",
        });
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "Laplace variable must be nonnegative",
        });
    }
    check_time(t)?;
    mittag_leffler(alpha, 1.0, -lambda * t.powf(alpha))
}

/// `int_0^inf e^{-mu t} q_alpha(x, t) dt = mu^{alpha-1} e^{-x mu^alpha}`.
pub fn laplace_t_q(alpha: f64, mu: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "fractional order must lie in (0, 1]",
        });
    }
    if !(mu > 0.0) || !(x >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "needs mu > 0 and x >= 0",
        });
    }
    Ok(mu.powf(alpha - 1.0) * (-x * mu.powf(alpha)).exp())
}

/// `mu^{alpha-1} / (mu^alpha + lambda)`, the transform in both variables.
pub fn double_laplace_q(alpha: f64, lambda: f64, mu: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "fractional order must lie in (0, 1]",
        });
    }
    if !(lambda >= 0.0) || !(mu > 0.0) {
        return Err(Error::InvalidParameter {
            name: "mu",
            value: mu,
            reason: "needs lambda >= 0 and mu > 0",
        });
    }
    Ok(mu.powf(alpha - 1.0) / (mu.powf(alpha) + lambda))
}

/// Caputo derivative of order `alpha` at `t = N h` by the L1 scheme,
/// from samples `f(0), f(h), ..., f(N h)`.
pub fn caputo_l1(alpha: f64, h: f64, samples: &[f64]) -> f64 {
    let n = samples.len() - 1;
    let mut acc = 0.0;
    for j in 0..n {
        let jf = j as f64;
        let b = (jf + 1.0).powf(1.0 - alpha) - jf.powf(1.0 - alpha);
        acc += b * (samples[n - j] - samples[n - j - 1]);
    }
    acc * h.powf(-alpha) / gamma(2.0 - alpha).expect("2 - alpha is positive")
}

/// `|D_t^alpha q + d_x q|` at `(x, t)`, Caputo derivative by the L1 scheme on
/// a uniform grid of step close to `h`, `d_x` by a central difference of
/// step `h`. Uses `q(x, 0) = 0` for `x > 0`.
pub fn caputo_residual(alpha: f64, x: f64, t: f64, h: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_time(t)?;
    if !(h > 0.0 && h < t) || !(x > h) {
        return Err(Error::InvalidParameter {
            name: "h",
            value: h,
            reason: "needs 0 < h < t and x > h",
        });
    }
    let n = (t / h).round().max(1.0) as usize;
    let step = t / n as f64;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(0.0);
    for j in 1..=n {
        samples.push(q_alpha_density(alpha, x, j as f64 * step)?);
    }
    let dt = caputo_l1(alpha, step, &samples);
    let dx = (q_alpha_density(alpha, x + h, t)? - q_alpha_density(alpha, x - h, t)?) / (2.0 * h);
    let r = (dt + dx).abs();
    if !r.is_finite() {
        return Err(Error::Numeric("Caputo residual is not finite".into()));
    }
    Ok(r)
}

/// `|d/dt L + lambda L|` for `L(t) = E e^{-lambda X(t)} = E_alpha(-lambda t^alpha)`:
/// the transport equation `d_t u + d_x u = 0` tested against `e^{-lambda x}`.
/// Vanishes at `alpha = 1`; uses `d/dt E_alpha(-lambda t^alpha) = -lambda t^{alpha-1} E_{alpha,alpha}(-lambda t^alpha)`.
pub fn transport_weak_residual(alpha: f64, lambda: f64, t: f64) -> Result<f64> {
    let l = laplace_x_q(alpha, lambda, t)?;
    let z = -lambda * t.powf(alpha);
    let dl = -lambda * t.powf(alpha - 1.0) * mittag_leffler(alpha, alpha, z)?;
    Ok((dl + lambda * l).abs())
}
