use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid equation order m={0}: the order must be at least 2")]
    InvalidOrder(u32),

    #[error("invalid time t={0}: t must be positive and finite")]
    InvalidTime(f64),

    #[error("invalid parameter {name}={value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("gamma function pole at x={0}")]
    Pole(f64),

    #[error("{what}: series could not be certified (error bound {bound:.3e})")]
    Range { what: &'static str, bound: f64 },

    #[error("{method} method is outside its range: scaled argument {scaled:.3} exceeds {limit}")]
    MethodRange {
        method: &'static str,
        scaled: f64,
        limit: f64,
    },

    #[error("method {method} does not apply to order m={m}")]
    MethodMismatch { method: &'static str, m: u32 },

    #[error("Fourier oracle did not converge (extrapolation spread {spread:.3e})")]
    OracleFailure { spread: f64 },

    #[error("quadrature did not reach tolerance: estimate {estimate:.3e} after {evals} evaluations")]
    Quadrature { estimate: f64, evals: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("non-finite result {value} at x={x}, t={t}")]
    NonFinite { value: f64, x: f64, t: f64 },
}

impl Error {
    /// Short machine-readable tag, used in CSV status fields and the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "invalid-order",
            Error::InvalidTime(_) => "invalid-time",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::Pole(_) => "pole",
            Error::Range { .. } => "range",
            Error::MethodRange { .. } => "method-range",
            Error::MethodMismatch { .. } => "method-mismatch",
            Error::OracleFailure { .. } => "oracle-failure",
            Error::Quadrature { .. } => "quadrature",
            Error::Numeric(_) => "numeric",
            Error::NonFinite { .. } => "non-finite",
        }
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}
