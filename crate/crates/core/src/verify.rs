//! Identity checks across all modules, collected into a deterministic report.
//!
//! Each check measures one number (a maximum error, a KS distance, a
//! convergence rate, ...) and compares it with a fixed bound. Monte Carlo
//! checks use `mc_samples` draws and bounds that scale like `1/sqrt(N)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::controls::NumericControls;
use crate::error::{Error, Result};
use crate::eval::{evaluate_point, Method};
use crate::fractional::{
    caputo_residual, double_laplace_q, laplace_t_q, laplace_x_q, q_alpha_cdf, q_alpha_density,
    transport_weak_residual, wright_fractional_density,
};
use crate::kernels::{
    f_m_eval, mass_positive_halfline, pde_residual, total_mass, u3_airy, u4_series, u_even_damped,
    u_fourier_oracle, u_odd_damped, u_odd_series, u_origin,
};
use crate::laws::{asymmetry_and_scale, nu_from_asymmetry, GenGammaLaw, StableLaw};
use crate::order::EquationOrder;
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::special::{gamma, mittag_leffler};
use crate::stable::{
    cauchy_composition_density, cauchy_composition_quadrature, empirical_cf, first_passage_cdf,
    first_passage_density, ks_statistic, mean_and_stderr, median, sample_gen_gamma,
    sample_skewed_stable, sample_zn, stable_cf, stable_density_series, subordinator_density_13,
    zn_cf, zn_cf_general, CompositionSpec, Sampler,
};

/// Acceptance rule for a measured quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

impl Bound {
    pub fn accepts(&self, measured: f64) -> bool {
        match *self {
            Bound::AtMost(b) => measured <= b,
            Bound::AtLeast(b) => measured >= b,
        }
    }

    fn render(&self) -> String {
        match *self {
            Bound::AtMost(b) => format!("<={b:.3e}"),
            Bound::AtLeast(b) => format!(">={b:.3e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail,
    Error(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub name: &'static str,
    pub group: &'static str,
    pub measured: Option<f64>,
    pub bound: Bound,
    pub status: Status,
}

impl CheckRow {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<CheckRow>,
    pub seed: u64,
    pub mc_samples: usize,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    name: &'a str,
    group: &'a str,
    measured: Option<String>,
    bound: String,
    status: String,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    seed: u64,
    mc_samples: usize,
    passed: usize,
    failed: usize,
    checks: Vec<JsonRow<'a>>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CheckRow::passed)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }

    fn status_text(row: &CheckRow) -> String {
        match &row.status {
            Status::Pass => "pass".into(),
            Status::Fail => "fail".into(),
            Status::Error(kind) => format!("error:{kind}"),
        }
    }

    /// CSV with header `name,group,measured,bound,status`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,group,measured,bound,status\n");
        for row in &self.rows {
            let measured = row.measured.map(|m| format!("{m:.6e}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                row.name,
                row.group,
                measured,
                row.bound.render(),
                Self::status_text(row)
            );
        }
        let _ = writeln!(
            out,
            "# seed={} mc_samples={} passed={} failed={}",
            self.seed,
            self.mc_samples,
            self.rows.len() - self.failures(),
            self.failures()
        );
        out
    }

    pub fn to_json(&self) -> String {
        let report = JsonReport {
            seed: self.seed,
            mc_samples: self.mc_samples,
            passed: self.rows.len() - self.failures(),
            failed: self.failures(),
            checks: self
                .rows
                .iter()
                .map(|row| JsonRow {
                    name: row.name,
                    group: row.group,
                    measured: row.measured.map(|m| format!("{m:.6e}")),
                    bound: row.bound.render(),
                    status: Self::status_text(row),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    }
}

type CheckFn = fn(&NumericControls) -> Result<f64>;

struct Check {
    name: &'static str,
    group: &'static str,
    bound: fn(&NumericControls) -> Bound,
    run: CheckFn,
}

fn mc_n(c: &NumericControls) -> f64 {
    c.mc_samples as f64
}

/// Independent stream per Monte Carlo check.
fn sampler(c: &NumericControls, stream: u64) -> Sampler {
    Sampler::new(c.rng_seed.wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

fn order(m: u32) -> EquationOrder {
    EquationOrder::new(m).expect("static order")
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn max_over<I, F>(items: I, mut f: F) -> Result<f64>
where
    I: IntoIterator,
    F: FnMut(I::Item) -> Result<f64>,
{
    let mut worst: f64 = 0.0;
    for item in items {
        let v = f(item)?;
        if v.is_nan() {
            return Err(Error::Numeric("check produced NaN".into()));
        }
        worst = worst.max(v);
    }
    Ok(worst)
}

fn gaussian(x: f64, t: f64) -> f64 {
    (-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt()
}

const TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn check_rotation(_: &NumericControls) -> Result<f64> {
    max_over((1..=50).map(|n| 2 * n + 1), |m| {
        let o = order(m);
        let (a, b, _) = o.constants();
        Ok((o.rotation_power() - Complex64::i()).norm().max((a * a + b * b - 1.0).abs()))
    })
}

fn check_origin_odd(c: &NumericControls) -> Result<f64> {
    max_over(1..=50u32, |n| {
        let m = (2 * n + 1) as f64;
        let closed = (n as f64 * PI / m).sin() * gamma(1.0 + 1.0 / m)? / PI;
        Ok((u_odd_series(n, 0.0, 1.0, c)?.value - closed).abs())
    })
}

fn check_origin_even(c: &NumericControls) -> Result<f64> {
    let quartic = (u4_series(0.0, 1.0, c)?.value - gamma(1.25)? / PI).abs();
    let heat = (u_even_damped(1, 0.0, 1.0, c)?.value - gamma(1.5)? / PI).abs();
    let gauss = (u_origin(order(2), 1.0)? - gaussian(0.0, 1.0)).abs();
    Ok(quartic.max(heat).max(gauss))
}

fn check_origin_limit(_: &NumericControls) -> Result<f64> {
    Ok((u_origin(order(101), 1.0)? - 1.0 / PI).abs())
}

fn check_gaussian(c: &NumericControls) -> Result<f64> {
    max_over([0.0, 1.0, 2.5], |x| {
        max_over(TIMES, |t| {
            Ok((evaluate_point(order(2), Method::Auto, x, t, c)?.value - gaussian(x, t)).abs())
        })
    })
}

fn check_biquadratic(c: &NumericControls) -> Result<f64> {
    max_over(grid(-3.0, 3.0, 31), |x| {
        Ok((u4_series(x, 1.0, c)?.value - u_even_damped(2, x, 1.0, c)?.value).abs())
    })
}

fn check_airy_series(c: &NumericControls) -> Result<f64> {
    max_over(grid(-4.0, 4.0, 41), |x| {
        max_over(TIMES, |t| Ok((u_odd_series(1, x, t, c)?.value - u3_airy(x, t)?).abs()))
    })
}

fn check_airy_damped(c: &NumericControls) -> Result<f64> {
    max_over(grid(-4.0, 4.0, 41), |x| {
        max_over(TIMES, |t| Ok((u_odd_damped(1, x, t, c)?.value - u3_airy(x, t)?).abs()))
    })
}

fn series_vs_damped(n: u32, c: &NumericControls) -> Result<f64> {
    max_over(grid(-3.0, 3.0, 41), |x| {
        max_over(TIMES, |t| {
            Ok((u_odd_series(n, x, t, c)?.value - u_odd_damped(n, x, t, c)?.value).abs())
        })
    })
}

fn series_vs_oracle(n: u32, c: &NumericControls) -> Result<f64> {
    max_over(grid(-3.0, 3.0, 13), |x| {
        max_over(TIMES, |t| {
            let oracle = u_fourier_oracle(order(2 * n + 1), x, t, c)?.value;
            Ok((u_odd_series(n, x, t, c)?.value - oracle).abs())
        })
    })
}

fn mass_error(m: u32, c: &NumericControls) -> Result<f64> {
    let expect = if m % 2 == 1 { 0.5 * (1.0 - 1.0 / m as f64) } else { 0.5 };
    max_over(TIMES, |t| {
        let r = mass_positive_halfline(order(m), t, c)?;
        if !r.tail_converged {
            return Err(Error::Range {
                what: "half-line mass tail",
                bound: r.upper,
            });
        }
        Ok((r.value - expect).abs())
    })
}

fn total_mass_error(m: u32, c: &NumericControls) -> Result<f64> {
    Ok((total_mass(order(m), 1.0, c)? - 1.0).abs())
}

fn check_scaling(c: &NumericControls) -> Result<f64> {
    let s: f64 = 1.7;
    max_over([3u32, 4, 5, 7], |m| {
        max_over([-2.0, -0.4, 0.9, 2.5], |x| {
            let base = evaluate_point(order(m), Method::Auto, x, 1.0, c)?.value;
            let scaled = evaluate_point(order(m), Method::Auto, x * s, s.powi(m as i32), c)?.value;
            Ok((s * scaled - base).abs())
        })
    })
}

fn check_even_symmetry(c: &NumericControls) -> Result<f64> {
    max_over([2u32, 4, 6], |m| {
        max_over([0.3, 1.1, 2.7], |x| {
            let a = evaluate_point(order(m), Method::Auto, x, 1.0, c)?.value;
            let b = evaluate_point(order(m), Method::Auto, -x, 1.0, c)?.value;
            Ok((a - b).abs())
        })
    })
}

fn check_u3_residual(_: &NumericControls) -> Result<f64> {
    max_over([(0.5, 1.0), (1.0, 1.0)], |(x, t)| pde_residual(order(3), u3_airy, x, t, 1e-2))
}

fn check_f1_residual(_: &NumericControls) -> Result<f64> {
    max_over([(0.5, 1.0), (1.0, 1.0)], |(x, t)| {
        pde_residual(order(3), |x, t| f_m_eval(1, x, t), x, t, 1e-2)
    })
}

fn check_gauss_residual(_: &NumericControls) -> Result<f64> {
    pde_residual(order(2), |x, t| Ok(gaussian(x, t)), 0.7, 1.0, 2e-4)
}

fn check_convolution(_: &NumericControls) -> Result<f64> {
    max_over([-1.0, 0.0, 1.0], |x| {
        max_over([0.5, 1.0, 2.0], |t| {
            Ok((cauchy_composition_quadrature(x, t)?.0 - cauchy_composition_density(x, t)?).abs())
        })
    })
}

fn subordinator_integral(weight: impl Fn(f64) -> f64) -> Result<f64> {
    let r = integrate_to_infinity(
        |s: f64| {
            if s <= 0.0 {
                0.0
            } else {
                weight(s) * subordinator_density_13(s, 1.0).unwrap_or(f64::NAN)
            }
        },
        0.0,
        Tolerance::new(1e-10, 1e-10).with_max_intervals(10_000),
    )
    .checked()?;
    Ok(r.value)
}

fn check_subordinator_mass(_: &NumericControls) -> Result<f64> {
    Ok((subordinator_integral(|_| 1.0)? - 1.0).abs())
}

fn check_subordinator_laplace(_: &NumericControls) -> Result<f64> {
    max_over([0.5, 1.0, 2.0], |lambda: f64| {
        let numeric = subordinator_integral(|s| (-lambda * s).exp())?;
        Ok((numeric - (-lambda.cbrt()).exp()).abs())
    })
}

fn check_subordinator_series(_: &NumericControls) -> Result<f64> {
    max_over([0.5, 1.0, 3.0], |s| {
        Ok((stable_density_series(1.0 / 3.0, s, 1.0)?.value - subordinator_density_13(s, 1.0)?).abs())
    })
}

fn check_first_passage(_: &NumericControls) -> Result<f64> {
    max_over([0.5, 1.0, 2.0], |x| {
        Ok((stable_density_series(0.5, x, 1.0)?.value - first_passage_density(x, 1.0)).abs())
    })
}

const BETAS: [f64; 5] = [-1.0, -0.5, 0.5, 1.0, 2.0];

fn check_zn_semigroup(_: &NumericControls) -> Result<f64> {
    max_over(1..=4u32, |depth| {
        max_over(BETAS, |beta| {
            let a = zn_cf_general(1, depth, beta, 0.3) * zn_cf_general(1, depth, beta, 0.9);
            Ok((a - zn_cf_general(1, depth, beta, 1.2)).norm())
        })
    })
}

fn check_zn_cauchy(_: &NumericControls) -> Result<f64> {
    max_over(TIMES, |t| {
        let spec = CompositionSpec::new(1, t)?;
        max_over(BETAS, |beta: f64| {
            let display = Complex64::new(-(3f64.sqrt() / 2.0) * t * beta.abs(), -(t / 2.0) * beta).exp();
            Ok((zn_cf(&spec, beta) - display).norm())
        })
    })
}

fn check_zn_paths(_: &NumericControls) -> Result<f64> {
    max_over(1..=4u32, |depth| {
        max_over(1..=3u32, |base| {
            let spec = CompositionSpec::general(base, depth, 1.0)?;
            max_over(BETAS, |beta| Ok((zn_cf(&spec, beta) - stable_cf(&spec.law(), beta)).norm()))
        })
    })
}

fn check_round_trip(_: &NumericControls) -> Result<f64> {
    let alphas = [0.2, 1.0 / 3.0, 0.5, 0.9, 1.2, 1.5, 1.9];
    max_over(alphas, |alpha: f64| {
        let limit = alpha.min(2.0 - alpha);
        max_over([-1.0, -0.5, 0.0, 0.3, 1.0], |frac: f64| {
            let nu = frac * limit;
            let (theta, sigma) = asymmetry_and_scale(alpha, nu);
            let back = nu_from_asymmetry(alpha, theta);
            let law = StableLaw::from_asymmetry(alpha, theta, 1.0)?;
            Ok((back - nu).abs().max((sigma - law.sigma()).abs()))
        })
    })
}

fn check_mc_first_passage(c: &NumericControls) -> Result<f64> {
    let batch = sample_skewed_stable(0.5, 1.0, c.mc_samples, &mut sampler(c, 1))?;
    Ok(ks_statistic(&batch.values, |x| first_passage_cdf(x, 1.0)))
}

fn check_mc_subordinator_laplace(c: &NumericControls) -> Result<f64> {
    let mut stream = 10;
    max_over([1.0 / 3.0, 0.5], |alpha: f64| {
        stream += 1;
        let batch = sample_skewed_stable(alpha, 1.0, c.mc_samples, &mut sampler(c, stream))?;
        max_over([0.5, 1.0, 2.0], |lambda: f64| {
            let (mean, se) = mean_and_stderr(&batch.values, |x| (-lambda * x).exp());
            Ok((mean - (-lambda.powf(alpha)).exp()).abs() / se)
        })
    })
}

fn zn_mc(depth: u32, c: &NumericControls) -> Result<f64> {
    let spec = CompositionSpec::new(depth, 1.0)?;
    let batch = sample_zn(&spec, c.mc_samples, &mut sampler(c, 20 + depth as u64))?;
    max_over(BETAS, |beta| Ok((empirical_cf(&batch.values, beta) - zn_cf(&spec, beta)).norm()))
}

fn check_mc_zn_median(c: &NumericControls) -> Result<f64> {
    let spec = CompositionSpec::new(1, 1.0)?;
    let batch = sample_zn(&spec, c.mc_samples, &mut sampler(c, 30))?;
    // asymptotic standard error of a Cauchy median: pi * scale / (2 sqrt(N))
    let se = PI * spec.law().cauchy_scale() / (2.0 * mc_n(c).sqrt());
    Ok((median(&batch.values) + 0.5).abs() / se)
}

fn check_mc_gen_gamma(c: &NumericControls) -> Result<f64> {
    let mut stream = 40;
    max_over([(2.0, 1.0), (3.0, 0.5)], |(g, t)| {
        stream += 1;
        let law = GenGammaLaw::new(g, t)?;
        let batch = sample_gen_gamma(&law, c.mc_samples, &mut sampler(c, stream))?;
        Ok(ks_statistic(&batch.values, |x| law.cdf(x)) * mc_n(c).sqrt())
    })
}

fn check_mc_gen_gamma_moment(c: &NumericControls) -> Result<f64> {
    let law = GenGammaLaw::new(3.0, 1.5)?;
    let batch = sample_gen_gamma(&law, c.mc_samples, &mut sampler(c, 50))?;
    let (mean, se) = mean_and_stderr(&batch.values, |x| x.powi(3));
    Ok((mean - 1.5).abs() / se)
}

fn check_mc_transform(c: &NumericControls) -> Result<f64> {
    let t = 1.0;
    let alpha = 0.5;
    let batch = sample_skewed_stable(alpha, t, c.mc_samples, &mut sampler(c, 60))?;
    let xs: Vec<f64> = batch.values.iter().map(|&y| t * (t / y).powf(alpha)).collect();
    let mut failure = None;
    let d = ks_statistic(&xs, |x| match q_alpha_cdf(alpha, x, t) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(d),
    }
}

fn q_integral(alpha: f64, t: f64, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let r = integrate_to_infinity(
        |x: f64| weight(x) * q_alpha_density(alpha, x, t).unwrap_or(f64::NAN),
        0.0,
        Tolerance::new(1e-11, 1e-11),
    )
    .checked()?;
    Ok(r.value)
}

fn check_q_normalisation(_: &NumericControls) -> Result<f64> {
    max_over([1.0 / 3.0, 0.5, 2.0 / 3.0], |alpha| {
        max_over(TIMES, |t| Ok((q_integral(alpha, t, |_| 1.0)? - 1.0).abs()))
    })
}

fn check_laplace_x(_: &NumericControls) -> Result<f64> {
    max_over([1.0 / 3.0, 0.5], |alpha| {
        max_over([0.5, 1.0, 2.0], |lambda: f64| {
            let numeric = q_integral(alpha, 1.0, |x| (-lambda * x).exp())?;
            Ok((numeric - laplace_x_q(alpha, lambda, 1.0)?).abs())
        })
    })
}

fn check_laplace_t(_: &NumericControls) -> Result<f64> {
    max_over([(0.5, 1.0, 1.0), (1.0 / 3.0, 2.0, 0.5), (2.0 / 3.0, 0.5, 1.5)], |(alpha, mu, x)| {
        let r = integrate_to_infinity(
            |t: f64| {
                if t <= 0.0 {
                    0.0
                } else {
                    (-mu * t).exp() * q_alpha_density(alpha, x, t).unwrap_or(f64::NAN)
                }
            },
            0.0,
            Tolerance::new(1e-10, 1e-10).with_max_intervals(10_000),
        )
        .checked()?;
        Ok((r.value - laplace_t_q(alpha, mu, x)?).abs())
    })
}

fn check_double_laplace(_: &NumericControls) -> Result<f64> {
    max_over([0.3, 0.5, 0.8], |alpha: f64| {
        max_over([(0.0, 1.0), (1.0, 1.0), (2.0, 0.5)], |(lambda, mu): (f64, f64)| {
            let l = double_laplace_q(alpha, lambda, mu)?;
            Ok((mu.powf(alpha) * l - mu.powf(alpha - 1.0) + lambda * l).abs())
        })
    })
}

fn check_double_iterated(_: &NumericControls) -> Result<f64> {
    max_over([(0.5, 1.0, 1.0), (1.0 / 3.0, 0.5, 2.0)], |(alpha, lambda, mu)| {
        let r = integrate_to_infinity(
            |t: f64| (-mu * t).exp() * laplace_x_q(alpha, lambda, t).unwrap_or(f64::NAN),
            0.0,
            Tolerance::new(1e-10, 1e-10).with_max_intervals(10_000),
        )
        .checked()?;
        Ok((r.value - double_laplace_q(alpha, lambda, mu)?).abs())
    })
}

fn check_fold(_: &NumericControls) -> Result<f64> {
    max_over([(0.5, 1.0, 1.0), (1.0 / 3.0, 0.7, 2.0), (0.8, 1.5, 0.5)], |(alpha, x, t)| {
        let fold = 2.0 * wright_fractional_density(2.0 * alpha, 1.0, x, t)?;
        Ok((fold - q_alpha_density(alpha, x, t)?).abs())
    })
}

fn check_wright_gaussian(_: &NumericControls) -> Result<f64> {
    max_over([0.0, 1.0], |x| Ok((wright_fractional_density(1.0, 1.0, x, 1.0)? - gaussian(x, 1.0)).abs()))
}

fn check_caputo(_: &NumericControls) -> Result<f64> {
    caputo_residual(0.5, 1.0, 1.0, 1.0 / 512.0)
}

fn check_caputo_rate(_: &NumericControls) -> Result<f64> {
    let coarse = caputo_residual(0.5, 1.0, 2.0, 1.0 / 128.0)?;
    let fine = caputo_residual(0.5, 1.0, 2.0, 1.0 / 512.0)?;
    Ok((coarse / fine).log2() / 2.0)
}

fn check_transport(_: &NumericControls) -> Result<f64> {
    transport_weak_residual(0.999, 1.0, 1.0)
}

fn check_mittag_leffler(_: &NumericControls) -> Result<f64> {
    max_over([0.5, 1.0, 3.0, 10.0], |x: f64| {
        let exact = (x * x).exp() * libm::erfc(x);
        Ok((mittag_leffler(0.5, 1.0, -x)? - exact).abs())
    })
}

macro_rules! check {
    ($name:expr, $group:expr, $bound:expr, $run:expr) => {
        Check {
            name: $name,
            group: $group,
            bound: $bound,
            run: $run,
        }
    };
}

fn catalogue() -> Vec<Check> {
    vec![
        check!("odd_rotation", "constants", |_| Bound::AtMost(1e-12), check_rotation),
        check!("origin_odd", "origin", |_| Bound::AtMost(1e-12), check_origin_odd),
        check!("origin_even", "origin", |_| Bound::AtMost(1e-12), check_origin_even),
        check!("origin_limit_m101", "origin", |_| Bound::AtMost(1e-2), check_origin_limit),
        check!("gaussian_reduction", "reductions", |_| Bound::AtMost(1e-9), check_gaussian),
        check!("biquadratic_vs_quadrature", "reductions", |_| Bound::AtMost(1e-7), check_biquadratic),
        check!("airy_vs_series", "reductions", |_| Bound::AtMost(1e-8), check_airy_series),
        check!("airy_vs_damped", "reductions", |_| Bound::AtMost(1e-7), check_airy_damped),
        check!("series_vs_damped_m3", "cross-method", |_| Bound::AtMost(1e-7), |c| series_vs_damped(1, c)),
        check!("series_vs_damped_m5", "cross-method", |_| Bound::AtMost(1e-7), |c| series_vs_damped(2, c)),
        check!("series_vs_damped_m7", "cross-method", |_| Bound::AtMost(1e-7), |c| series_vs_damped(3, c)),
        check!("series_vs_oracle_m3", "cross-method", |_| Bound::AtMost(1e-5), |c| series_vs_oracle(1, c)),
        check!("series_vs_oracle_m5", "cross-method", |_| Bound::AtMost(1e-5), |c| series_vs_oracle(2, c)),
        check!("series_vs_oracle_m7", "cross-method", |_| Bound::AtMost(1e-5), |c| series_vs_oracle(3, c)),
        check!("mass_m3", "mass", |_| Bound::AtMost(1e-4), |c| mass_error(3, c)),
        check!("mass_m5", "mass", |_| Bound::AtMost(1e-4), |c| mass_error(5, c)),
        check!("mass_m7", "mass", |_| Bound::AtMost(1e-4), |c| mass_error(7, c)),
        check!("mass_m4", "mass", |_| Bound::AtMost(1e-6), |c| mass_error(4, c)),
        check!("mass_m6", "mass", |_| Bound::AtMost(1e-6), |c| mass_error(6, c)),
        check!("total_mass_m3", "mass", |_| Bound::AtMost(1e-5), |c| total_mass_error(3, c)),
        check!("total_mass_m4", "mass", |_| Bound::AtMost(1e-5), |c| total_mass_error(4, c)),
        check!("total_mass_m5", "mass", |_| Bound::AtMost(1e-5), |c| total_mass_error(5, c)),
        check!("self_similarity", "scaling", |_| Bound::AtMost(1e-9), check_scaling),
        check!("even_symmetry", "scaling", |_| Bound::AtMost(1e-12), check_even_symmetry),
        check!("residual_u3", "residual", |_| Bound::AtMost(1e-4), check_u3_residual),
        check!("residual_f1", "residual", |_| Bound::AtMost(1e-3), check_f1_residual),
        check!("residual_gaussian", "residual", |_| Bound::AtMost(1e-8), check_gauss_residual),
        check!("airy_squared_cauchy", "composition", |_| Bound::AtMost(1e-5), check_convolution),
        check!("subordinator_mass", "composition", |_| Bound::AtMost(1e-5), check_subordinator_mass),
        check!("subordinator_laplace", "composition", |_| Bound::AtMost(1e-5), check_subordinator_laplace),
        check!("subordinator_vs_series", "composition", |_| Bound::AtMost(1e-6), check_subordinator_series),
        check!("first_passage_series", "composition", |_| Bound::AtMost(1e-8), check_first_passage),
        check!("zn_semigroup", "cf", |_| Bound::AtMost(1e-12), check_zn_semigroup),
        check!("zn1_cauchy_display", "cf", |_| Bound::AtMost(1e-15), check_zn_cauchy),
        check!("zn_two_paths", "cf", |_| Bound::AtMost(1e-14), check_zn_paths),
        check!("parameter_round_trip", "cf", |_| Bound::AtMost(1e-14), check_round_trip),
        check!("mc_first_passage_ks", "mc", |c| Bound::AtMost(3.16 / mc_n(c).sqrt()), check_mc_first_passage),
        check!("mc_subordinator_laplace_z", "mc", |_| Bound::AtMost(3.0), check_mc_subordinator_laplace),
        check!("mc_zn1_cf", "mc", |c| Bound::AtMost(4.0 / mc_n(c).sqrt()), |c| zn_mc(1, c)),
        check!("mc_zn2_cf", "mc", |c| Bound::AtMost(4.0 / mc_n(c).sqrt()), |c| zn_mc(2, c)),
        check!("mc_zn1_median_z", "mc", |_| Bound::AtMost(3.0), check_mc_zn_median),
        check!("mc_gen_gamma_ks_scaled", "mc", |_| Bound::AtMost(1.63), check_mc_gen_gamma),
        check!("mc_gen_gamma_moment_z", "mc", |_| Bound::AtMost(3.0), check_mc_gen_gamma_moment),
        check!("mc_y_to_x_ks", "mc", |c| Bound::AtMost(4.74 / mc_n(c).sqrt()), check_mc_transform),
        check!("mittag_leffler_half", "fractional", |_| Bound::AtMost(1e-10), check_mittag_leffler),
        check!("q_normalisation", "fractional", |_| Bound::AtMost(1e-6), check_q_normalisation),
        check!("laplace_x", "fractional", |_| Bound::AtMost(1e-6), check_laplace_x),
        check!("laplace_t", "fractional", |_| Bound::AtMost(1e-5), check_laplace_t),
        check!("double_laplace_equation", "fractional", |_| Bound::AtMost(1e-14), check_double_laplace),
        check!("double_laplace_iterated", "fractional", |_| Bound::AtMost(1e-5), check_double_iterated),
        check!("wright_fold", "fractional", |_| Bound::AtMost(1e-8), check_fold),
        check!("wright_gaussian", "fractional", |_| Bound::AtMost(1e-9), check_wright_gaussian),
        check!("caputo_residual", "fractional", |_| Bound::AtMost(5e-3), check_caputo),
        check!("caputo_rate", "fractional", |_| Bound::AtLeast(1.0), check_caputo_rate),
        check!("transport_limit", "fractional", |_| Bound::AtMost(5e-3), check_transport),
    ]
}

/// Names and groups of every available check, in report order.
pub fn available_checks() -> Vec<(&'static str, &'static str)> {
    catalogue().iter().map(|c| (c.name, c.group)).collect()
}

/// Runs the checks whose name or group appears in `only` (all when empty).
pub fn run_verify(controls: &NumericControls, only: &[String]) -> Result<Report> {
    controls.validate()?;
    let selected: Vec<Check> = catalogue()
        .into_iter()
        .filter(|c| only.is_empty() || only.iter().any(|o| o == c.name || o == c.group))
        .collect();
    if selected.is_empty() {
        return Err(Error::InvalidParameter {
            name: "only",
            value: f64::NAN,
            reason: "no check matches the selection",
        });
    }
    let rows = selected
        .into_iter()
        .map(|check| {
            let bound = (check.bound)(controls);
            let (measured, status) = match (check.run)(controls) {
                Ok(v) if bound.accepts(v) => (Some(v), Status::Pass),
                Ok(v) => (Some(v), Status::Fail),
                Err(e) => (None, Status::Error(e.kind().to_string())),
            };
            CheckRow {
                name: check.name,
                group: check.group,
                measured,
                bound,
                status,
            }
        })
        .collect();
    Ok(Report {
        rows,
        seed: controls.rng_seed,
        mc_samples: controls.mc_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_names_are_unique() {
        let names = available_checks();
        let mut sorted: Vec<_> = names.iter().map(|n| n.0).collect();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), names.len());
    }

    #[test]
    fn selection_by_group_and_name() {
        let c = NumericControls::default();
        let report = run_verify(&c, &["cf".to_string()]).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.all_passed(), "{}", report.to_csv());
        let one = run_verify(&c, &["origin_limit_m101".to_string()]).unwrap();
        assert_eq!(one.rows.len(), 1);
        assert!(run_verify(&c, &["nothing".to_string()]).is_err());
    }

    #[test]
    fn bounds() {
        assert!(Bound::AtMost(1.0).accepts(1.0));
        assert!(!Bound::AtMost(1.0).accepts(f64::NAN));
        assert!(Bound::AtLeast(1.0).accepts(1.5));
        assert!(!Bound::AtLeast(1.0).accepts(0.5));
    }

    #[test]
    fn csv_layout() {
        let report = Report {
            rows: vec![CheckRow {
                name: "x",
                group: "g",
                measured: None,
                bound: Bound::AtMost(1e-3),
                status: Status::Error("range".into()),
            }],
            seed: 1,
            mc_samples: 10,
        };
        let csv = report.to_csv();
        assert!(csv.starts_with("name,group,measured,bound,status\nx,g,,<=1.000e-3,error:range\n"));
        assert!(!report.all_passed());
        assert!(report.to_json().contains("\"failed\": 1"));
    }
}
