//! Stable laws arising from subordinated pseudo-processes: characteristic
//! functions, the Cauchy composition, the one-sided densities and samplers.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{check_time, Error, Result};
use crate::kernels::u3_airy;
use crate::laws::{GenGammaLaw, StableLaw};
use crate::quad::{integrate_breaks, Tolerance};
use crate::special::{airy_ai, gamma, KahanSum, SeriesEval};

/// `Z_n`: the pseudo-process of order `2b + 1` run at the clock obtained by
/// iterating `n - 1` subordinators of index `1/(2b + 1)` on top of one more.
///
/// `Z_n` is stable with index `(2b+1)^{-(n-1)}` and characteristic function
/// `exp(-t |beta|^alpha (cos(pi/(2(2b+1)^n)) + i sgn(beta) sin(pi/(2(2b+1)^n))))`,
/// so in the rotation convention of [`StableLaw`] its `nu` is `-(2b+1)^{-n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositionSpec {
    depth: u32,
    base_n: u32,
    t: f64,
}

impl CompositionSpec {
    /// Composition built on the third-order process.
    pub fn new(depth: u32, t: f64) -> Result<Self> {
        Self::general(1, depth, t)
    }

    pub fn general(base_n: u32, depth: u32, t: f64) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameter {
                name: "depth",
                value: 0.0,
                reason: "at least one subordinator is required",
            });
        }
        if base_n == 0 {
            return Err(Error::InvalidOrder(1));
        }
        check_time(t)?;
        Ok(Self { depth, base_n, t })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn base_n(&self) -> u32 {
        self.base_n
    }

    /// Order `2b + 1` of the underlying pseudo-process.
    pub fn base_order(&self) -> u32 {
        2 * self.base_n + 1
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn alpha_eff(&self) -> f64 {
        (self.base_order() as f64).powi(-(self.depth as i32 - 1))
    }

    pub fn nu_eff(&self) -> f64 {
        -(self.base_order() as f64).powi(-(self.depth as i32))
    }

    pub fn law(&self) -> StableLaw {
        StableLaw::new(self.alpha_eff(), self.nu_eff(), self.t)
            .expect("composition parameters are admissible")
    }
}

/// Characteristic function in scale/asymmetry form,
/// `exp(-sigma t |beta|^alpha (1 - i theta sgn(beta) tan(pi alpha/2)))`.
pub fn stable_cf(law: &StableLaw, beta: f64) -> Complex64 {
    if beta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let skew = if law.alpha() == 1.0 {
        law.skew_product()
    } else {
        law.theta() * (FRAC_PI_2 * law.alpha()).tan()
    };
    let bracket = Complex64::new(1.0, -skew * beta.signum());
    (-(law.sigma() * law.t() * beta.abs().powf(law.alpha())) * bracket).exp()
}

/// `E exp(i beta Z_n(t))` written out directly.
pub fn zn_cf(spec: &CompositionSpec, beta: f64) -> Complex64 {
    zn_cf_general(spec.base_n, spec.depth, beta, spec.t)
}

/// `exp(-t |beta|^{1/(2n+1)^{m-1}} (cos(pi/(2(2n+1)^m)) + i sgn(beta) sin(pi/(2(2n+1)^m))))`.
///
/// `depth_m = 1` is the asymmetric Cauchy law with location
/// `-t sin(pi/(2(2n+1)))` and scale `t cos(pi/(2(2n+1)))`.
pub fn zn_cf_general(base_n: u32, depth_m: u32, beta: f64, t: f64) -> Complex64 {
    if beta == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let q = (2 * base_n + 1) as f64;
    let alpha = q.powi(-(depth_m as i32 - 1));
    let angle = PI / (2.0 * q.powi(depth_m as i32));
    let rot = Complex64::new(angle.cos(), beta.signum() * angle.sin());
    (-(t * beta.abs().powf(alpha)) * rot).exp()
}

/// Density of `T_{1/3}(t)`: `(t/s) (3s)^{-1/3} Ai(t (3s)^{-1/3})`.
pub fn subordinator_density_13(s: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    if s.is_nan() || s < 0.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "the subordinator is supported on s > 0",
        });
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let c = (3.0 * s).cbrt();
    Ok(t / s * airy_ai(t / c) / c)
}

/// `(sqrt(3)/(2 pi)) t / ((x + t/2)^2 + 3t^2/4)`, the law of the third-order
/// process observed at an independent `T_{1/3}(t)`.
pub fn cauchy_composition_density(x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let shift = x + 0.5 * t;
    Ok(3f64.sqrt() / (2.0 * PI) * t / (shift * shift + 0.75 * t * t))
}

/// `int_0^inf u_3(x, s) P(T_{1/3}(t) in ds)` by quadrature, after the
/// substitution `sigma = (3s)^{-1/3}` which turns it into
/// `int_0^inf 3 t sigma Ai(x sigma) Ai(t sigma) d sigma`.
pub fn cauchy_composition_quadrature(x: f64, t: f64) -> Result<(f64, f64)> {
    check_time(t)?;
    // Ai(t sigma) < 1e-300 beyond t sigma = 55
    let upper = 55.0 / t;
    let phase = (2.0 / 3.0) * (x.abs() * upper).powf(1.5);
    let pieces = ((phase / PI).ceil() as usize).clamp(8, 20_000);
    let breaks: Vec<f64> = (0..=pieces).map(|i| upper * i as f64 / pieces as f64).collect();
    let r = integrate_breaks(
        |sigma: f64| 3.0 * t * sigma * airy_ai(x * sigma) * airy_ai(t * sigma),
        &breaks,
        Tolerance::new(1e-13, 1e-12),
    )
    .checked()?;
    Ok((r.value, r.abs_err))
}

/// Same integral in the original variable, `int_0^inf u_3(x, s) g(s, t) ds`.
pub fn cauchy_composition_direct(x: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    let r = crate::quad::integrate_to_infinity(
        |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            u3_airy(x, s).unwrap_or(0.0) * subordinator_density_13(s, t).unwrap_or(0.0)
        },
        0.0,
        Tolerance::new(1e-11, 1e-10).with_max_intervals(20_000),
    );
    Ok(r.value)
}

/// Density of the positive stable law `T_alpha(t)` by the descending series
/// `(alpha/pi) sum_k (-1)^k Gamma(alpha(1+k)) x^{-alpha(1+k)-1} t^{1+k} sin(pi alpha(1+k)) / k!`.
///
/// The sum is accepted only when the truncation and rounding bounds together
/// stay below `1e-10 |p| + 1e-300`; otherwise a range error is returned.
pub fn stable_density_series(alpha: f64, x: f64, t: f64) -> Result<SeriesEval> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "the descending series needs alpha in (0, 1)",
        });
    }
    check_time(t)?;
    if !(x > 0.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "the density is evaluated on x > 0",
        });
    }
    // p = (alpha / (pi x)) sum_k (-1)^k Gamma(alpha(k+1)) w^{k+1} sin(pi alpha (k+1)) / k!
    let w = t * x.powf(-alpha);
    let pref = alpha / (PI * x);
    let mut sum = KahanSum::default();
    let mut p = w; // (-1)^k w^{k+1} / k!
    for k in 0..5000usize {
        let kf = k as f64;
        let a = alpha * (kf + 1.0);
        sum.add(p * gamma(a)? * (PI * a).sin());
        let next_p = -p * w / (kf + 1.0);
        let next_env = next_p.abs() * gamma(a + alpha)?;
        if !next_env.is_finite() {
            break;
        }
        // Wendel: Gamma(y + alpha)/Gamma(y) <= y^alpha
        let rho = w * (a + alpha).powf(alpha) / (kf + 2.0);
        if rho < 0.5 && (next_env <= 1e-16 * sum.value().abs() || next_env <= sum.rounding_bound()) {
            let eval = SeriesEval {
                value: pref * sum.value(),
                terms_used: k + 1,
                truncation_bound: pref * next_env / (1.0 - rho),
                rounding_bound: pref * sum.rounding_bound(),
            };
            if eval.error_bound() > 1e-10 * eval.value.abs() + 1e-300 {
                return Err(Error::Range {
                    what: "stable density series",
                    bound: eval.error_bound(),
                });
            }
            return Ok(eval);
        }
        p = next_p;
    }
    Err(Error::Range {
        what: "stable density series",
        bound: f64::INFINITY,
    })
}

/// Density of `T_{1/2}(t)`: `t (4 pi x^3)^{-1/2} e^{-t^2/(4x)}`.
pub fn first_passage_density(x: f64, t: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    t / (4.0 * PI * x * x * x).sqrt() * (-t * t / (4.0 * x)).exp()
}

/// CDF of `T_{1/2}(t)`: `erfc(t / (2 sqrt(x)))`.
pub fn first_passage_cdf(x: f64, t: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    libm::erfc(t / (2.0 * x.sqrt()))
}

/// Seeded, deterministic random source for the samplers.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on the open interval `(0, 1)`.
    fn open_unit(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    fn exponential(&mut self) -> f64 {
        Exp1.sample(&mut self.rng)
    }
}

/// Samples together with the seed and a description of their law.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub law_tag: String,
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidParameter {
            name: "count",
            value: 0.0,
            reason: "at least one sample is required",
        });
    }
    Ok(())
}

/// `X = (t E)^{1/gamma}` with `E` standard exponential.
pub fn sample_gen_gamma(law: &GenGammaLaw, count: usize, sampler: &mut Sampler) -> Result<SampleBatch> {
    check_count(count)?;
    let inv = 1.0 / law.shape();
    let values = (0..count)
        .map(|_| (law.t() * sampler.exponential()).powf(inv))
        .collect();
    Ok(SampleBatch {
        values,
        seed: sampler.seed(),
        law_tag: format!("gen-gamma(gamma={}, t={})", law.shape(), law.t()),
    })
}

/// One draw from `law` by the Chambers-Mallows-Stuck construction.
///
/// With `V` uniform on `(-pi/2, pi/2)` and `W` standard exponential,
/// `t^{1/alpha} sin(alpha V + pi nu/2) / cos(V)^{1/alpha}
///  * (cos((1-alpha) V - pi nu/2) / W)^{(1-alpha)/alpha}`
/// has characteristic function `exp(-t |beta|^alpha e^{-i pi nu sgn(beta)/2})`.
/// For `nu = alpha < 1` this is Kanter's positive variable. `alpha = 1` is
/// sampled as a Cauchy variable by inversion.
pub fn sample_stable_one(law: &StableLaw, sampler: &mut Sampler) -> f64 {
    let alpha = law.alpha();
    if alpha == 1.0 {
        let u = sampler.open_unit();
        return law.cauchy_location() + law.cauchy_scale() * (PI * (u - 0.5)).tan();
    }
    let v = PI * (sampler.open_unit() - 0.5);
    let w = sampler.exponential();
    let shift = FRAC_PI_2 * law.nu();
    let head = (alpha * v + shift).sin() / v.cos().powf(1.0 / alpha);
    let tail = (((1.0 - alpha) * v - shift).cos() / w).powf((1.0 - alpha) / alpha);
    law.t().powf(1.0 / alpha) * head * tail
}

pub fn sample_stable(law: &StableLaw, count: usize, sampler: &mut Sampler) -> Result<SampleBatch> {
    check_count(count)?;
    let values = (0..count).map(|_| sample_stable_one(law, sampler)).collect();
    Ok(SampleBatch {
        values,
        seed: sampler.seed(),
        law_tag: format!("stable(alpha={}, nu={}, t={})", law.alpha(), law.nu(), law.t()),
    })
}

/// Positive stable subordinator `T_alpha(t)`, `E e^{-lambda T} = e^{-lambda^alpha t}`.
pub fn sample_skewed_stable(alpha: f64, t: f64, count: usize, sampler: &mut Sampler) -> Result<SampleBatch> {
    let law = StableLaw::subordinator(alpha, t)?;
    let mut batch = sample_stable(&law, count, sampler)?;
    batch.law_tag = format!("subordinator(alpha={alpha}, t={t})");
    Ok(batch)
}

/// Draws from the stable law equal to `Z_n`.
pub fn sample_zn(spec: &CompositionSpec, count: usize, sampler: &mut Sampler) -> Result<SampleBatch> {
    let mut batch = sample_stable(&spec.law(), count, sampler)?;
    batch.law_tag = format!(
        "Z(depth={}, order={}, t={})",
        spec.depth(),
        spec.base_order(),
        spec.t()
    );
    Ok(batch)
}

/// Kolmogorov-Smirnov distance between the sample and `cdf`.
pub fn ks_statistic(values: &[f64], mut cdf: impl FnMut(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Sample mean of `exp(i beta X)`.
pub fn empirical_cf(values: &[f64], beta: f64) -> Complex64 {
    let (mut re, mut im) = (0.0, 0.0);
    for &x in values {
        let (s, c) = (beta * x).sin_cos();
        re += c;
        im += s;
    }
    let n = values.len() as f64;
    Complex64::new(re / n, im / n)
}

/// Sample mean of `f(X)` and its standard error.
pub fn mean_and_stderr(values: &[f64], f: impl Fn(f64) -> f64) -> (f64, f64) {
    let n = values.len() as f64;
    let (mut sum, mut sq) = (0.0, 0.0);
    for &x in values {
        let y = f(x);
        sum += y;
        sq += y * y;
    }
    let mean = sum / n;
    let var = (sq / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

/// Sample median (average of the middle pair for even sizes).
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
