//! Equation order `m`, its parity split and the sign convention of `kappa_m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Parity split of the order: `m = 2n + 1` or `m = 2n`, with `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd(u32),
    Even(u32),
}

/// Order of `du/dt = kappa_m d^m u/dx^m`.
///
/// Odd orders follow the `(-1)^n` branch, whose Fourier symbol is
/// `exp(-i t beta^m)` under `int e^{i beta x} u dx`. Setting `mirrored`
/// selects the other sign, whose solution is `u(-x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquationOrder {
    m: u32,
    mirrored: bool,
}

impl EquationOrder {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidOrder(m));
        }
        Ok(Self { m, mirrored: false })
    }

    /// Odd order with the opposite sign of `kappa_m`. Ignored for even orders,
    /// whose sign is fixed by well-posedness.
    pub fn mirrored(self) -> Self {
        Self {
            mirrored: self.m % 2 == 1,
            ..self
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn is_mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn parity(&self) -> Parity {
        if self.m % 2 == 0 {
            Parity::Even(self.m / 2)
        } else {
            Parity::Odd((self.m - 1) / 2)
        }
    }

    /// `n` in `m = 2n` or `m = 2n + 1`.
    pub fn n(&self) -> u32 {
        match self.parity() {
            Parity::Odd(n) | Parity::Even(n) => n,
        }
    }

    pub fn is_odd(&self) -> bool {
        matches!(self.parity(), Parity::Odd(_))
    }

    /// Sign of `kappa_m`: `(-1)^{n+1}` for even orders, `(-1)^n` for odd
    /// orders (negated when mirrored).
    pub fn kappa(&self) -> f64 {
        let n = self.n();
        match self.parity() {
            Parity::Even(_) => sign_pow(n + 1),
            Parity::Odd(_) => {
                let s = sign_pow(n);
                if self.mirrored {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// `(a_n, b_n, kappa)`. Odd orders give `a_n = cos(pi/(2m))`,
    /// `b_n = sin(pi/(2m))`; even orders give the pure sine form `a = 1, b = 0`.
    pub fn constants(&self) -> (f64, f64, f64) {
        match self.parity() {
            Parity::Odd(_) => {
                let phi = PI / (2.0 * self.m as f64);
                (phi.cos(), phi.sin(), self.kappa())
            }
            Parity::Even(_) => (1.0, 0.0, self.kappa()),
        }
    }

    /// `(a + i b)^m`, which equals `i` for every odd order.
    pub fn rotation_power(&self) -> Complex64 {
        let (a, b, _) = self.constants();
        Complex64::new(a, b).powu(self.m)
    }
}

/// `(a_n, b_n, kappa)` for order `m`.
pub fn derive_constants(m: u32) -> Result<(f64, f64, f64)> {
    Ok(EquationOrder::new(m)?.constants())
}

fn sign_pow(k: u32) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
