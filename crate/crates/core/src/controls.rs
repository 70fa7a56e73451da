use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation, quadrature and Monte Carlo settings shared by all evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericControls {
    /// Series stop when the next term is below this fraction of the partial sum.
    pub series_rel_tol: f64,
    pub series_max_terms: usize,
    pub quad_abs_tol: f64,
    /// Integrate `w` until `t w^m` exceeds this value; the tail is below `exp(-value)`.
    pub quad_cutoff_decades: f64,
    pub mc_samples: usize,
    pub rng_seed: u64,
}

impl Default for NumericControls {
    fn default() -> Self {
        Self {
            series_rel_tol: 1e-12,
            series_max_terms: 400,
            quad_abs_tol: 1e-10,
            quad_cutoff_decades: 40.0,
            mc_samples: 1_000_000,
            rng_seed: 0x5eed_0f_4a11,
        }
    }
}

impl NumericControls {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("series_rel_tol", self.series_rel_tol),
            ("quad_abs_tol", self.quad_abs_tol),
            ("quad_cutoff_decades", self.quad_cutoff_decades),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive and finite",
                });
            }
        }
        if self.series_max_terms < 10 {
            return Err(Error::InvalidParameter {
                name: "series_max_terms",
                value: self.series_max_terms as f64,
                reason: "must be at least 10",
            });
        }
        if self.mc_samples == 0 {
            return Err(Error::InvalidParameter {
                name: "mc_samples",
                value: 0.0,
                reason: "must be positive",
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = NumericControls::default();
        c.validate().unwrap();
        assert_eq!(c.series_max_terms, 400);
        assert_eq!(c.mc_samples, 1_000_000);
    }

    #[test]
    fn rejects_bad_values() {
        let c = NumericControls {
            quad_abs_tol: 0.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = NumericControls {
            series_max_terms: 9,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = NumericControls {
            series_rel_tol: f64::NAN,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
