//! Probability laws that parameterise the representations: the generalized
//! gamma law and the four-parameter stable law.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{check_time, Error, Result};
use crate::special::gamma;

/// Generalized gamma law with density `gamma x^{gamma-1} / t * exp(-x^gamma / t)`
/// on `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenGammaLaw {
    gamma: f64,
    t: f64,
}

impl GenGammaLaw {
    pub fn new(gamma: f64, t: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "shape exponent must be positive",
            });
        }
        check_time(t)?;
        Ok(Self { gamma, t })
    }

    pub fn shape(&self) -> f64 {
        self.gamma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn density(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let g = self.gamma;
        g * x.powf(g - 1.0) / self.t * (-x.powf(g) / self.t).exp()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -(-x.powf(self.gamma) / self.t).exp_m1()
        }
    }

    /// `E[G^k] = t^{k/gamma} Gamma(1 + k/gamma)`.
    pub fn moment(&self, k: f64) -> Result<f64> {
        Ok(self.t.powf(k / self.gamma) * gamma(1.0 + k / self.gamma)?)
    }
}

/// Stable law with characteristic function
/// `exp(-t |beta|^alpha e^{-i pi nu sgn(beta) / 2})`.
///
/// The same law in scale/asymmetry form is
/// `exp(-sigma t |beta|^alpha (1 - i theta sgn(beta) tan(pi alpha / 2)))` with
/// `sigma = cos(pi nu / 2)` and `theta = tan(pi nu / 2) / tan(pi alpha / 2)`.
/// `nu = alpha` with `alpha < 1` is the positive subordinator with Laplace
/// transform `exp(-t lambda^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    alpha: f64,
    nu: f64,
    t: f64,
}

impl StableLaw {
    pub fn new(alpha: f64, nu: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "stability index must lie in (0, 2]",
            });
        }
        check_time(t)?;
        let limit = alpha.min(2.0 - alpha);
        let admissible = if alpha == 1.0 {
            nu.abs() < 1.0
        } else {
            nu.abs() <= limit * (1.0 + 4.0 * f64::EPSILON)
        };
        if !admissible || !nu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "nu",
                value: nu,
                reason: "asymmetry outside |theta| <= 1",
            });
        }
        Ok(Self { alpha, nu, t })
    }

    /// Builds the law from the asymmetry `theta`; needs `alpha != 1`, where
    /// `tan(pi alpha / 2)` is infinite.
    pub fn from_asymmetry(alpha: f64, theta: f64, t: f64) -> Result<Self> {
        if alpha == 1.0 {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "theta does not determine nu at alpha = 1",
            });
        }
        if !(theta.abs() <= 1.0 + 8.0 * f64::EPSILON) {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                reason: "asymmetry must satisfy |theta| <= 1",
            });
        }
        let theta = theta.clamp(-1.0, 1.0);
        let nu = (theta * (FRAC_PI_2 * alpha).tan()).atan() / FRAC_PI_2;
        let limit = alpha.min(2.0 - alpha);
        Self::new(alpha, nu.clamp(-limit, limit), t)
    }

    /// Positively skewed subordinator `T_alpha(t)` with `E e^{-lambda T} = e^{-lambda^alpha t}`.
    pub fn subordinator(alpha: f64, t: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "subordinators need alpha in (0, 1)",
            });
        }
        Self::new(alpha, alpha, t)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_time(self, t: f64) -> Result<Self> {
        Self::new(self.alpha, self.nu, t)
    }

    pub fn sigma(&self) -> f64 {
        (FRAC_PI_2 * self.nu).cos()
    }

    /// `theta = tan(pi nu/2) / tan(pi alpha/2)`; zero at `alpha = 1`.
    pub fn theta(&self) -> f64 {
        if self.alpha == 1.0 {
            0.0
        } else {
            (FRAC_PI_2 * self.nu).tan() / (FRAC_PI_2 * self.alpha).tan()
        }
    }

    /// `theta * tan(pi alpha / 2) = tan(pi nu / 2)`, finite for every admissible law.
    pub fn skew_product(&self) -> f64 {
        (FRAC_PI_2 * self.nu).tan()
    }

    /// Characteristic function in rotation form `exp(-t |beta|^alpha e^{-i pi nu sgn/2})`.
    pub fn cf(&self, beta: f64) -> Complex64 {
        if beta == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let rot = Complex64::from_polar(1.0, -FRAC_PI_2 * self.nu * beta.signum());
        (-(self.t * beta.abs().powf(self.alpha)) * rot).exp()
    }

    /// For `alpha = 1` the law is Cauchy with this location and [`Self::cauchy_scale`].
    pub fn cauchy_location(&self) -> f64 {
        self.t * (FRAC_PI_2 * self.nu).sin()
    }

    pub fn cauchy_scale(&self) -> f64 {
        self.t * (FRAC_PI_2 * self.nu).cos()
    }

    pub fn is_subordinator(&self) -> bool {
        self.alpha < 1.0 && (self.nu - self.alpha).abs() <= 4.0 * f64::EPSILON
    }
}

/// Round trip helper: `(alpha, nu) -> (theta, sigma)`.
pub fn asymmetry_and_scale(alpha: f64, nu: f64) -> (f64, f64) {
    let law = StableLaw { alpha, nu, t: 1.0 };
    (law.theta(), law.sigma())
}

/// Round trip helper: `(alpha, theta) -> nu`.
pub fn nu_from_asymmetry(alpha: f64, theta: f64) -> f64 {
    (theta * (PI * alpha / 2.0).tan()).atan() * 2.0 / PI
}
