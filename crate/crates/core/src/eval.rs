//! Grid evaluation with method selection and per-point error reporting.

use std::fmt;
use std::str::FromStr;

use crate::controls::NumericControls;
use crate::error::{Error, Result};
use crate::kernels::{
    u3_airy, u4_series, u_auto, u_even_damped, u_fourier_oracle, u_odd_contour, u_odd_damped,
    u_odd_series, KernelMethod, KernelValue,
};
use crate::order::{EquationOrder, Parity};

/// Method selector of an evaluation request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    #[default]
    Auto,
    Series,
    Damped,
    Fourier,
    Airy,
    Contour,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Auto,
        Method::Series,
        Method::Damped,
        Method::Fourier,
        Method::Airy,
        Method::Contour,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Series => "series",
            Method::Damped => "damped",
            Method::Fourier => "fourier",
            Method::Airy => "airy",
            Method::Contour => "contour",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub order: EquationOrder,
    pub points: Vec<(f64, f64)>,
    pub method: Method,
    pub controls: NumericControls,
}

impl EvalRequest {
    pub fn new(order: EquationOrder, points: Vec<(f64, f64)>) -> Self {
        Self {
            order,
            points,
            method: Method::Auto,
            controls: NumericControls::default(),
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_controls(mut self, controls: NumericControls) -> Self {
        self.controls = controls;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub x: f64,
    pub t: f64,
    pub outcome: Result<KernelValue>,
}

/// Evaluates one point; the mirror flag of `order` is applied here.
pub fn evaluate_point(
    order: EquationOrder,
    method: Method,
    x: f64,
    t: f64,
    controls: &NumericControls,
) -> Result<KernelValue> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must be finite",
        });
    }
    crate::error::check_time(t)?;
    let base = EquationOrder::new(order.m())?;
    let x = if order.is_mirrored() { -x } else { x };
    let mismatch = || Error::MethodMismatch {
        method: method.name(),
        m: order.m(),
    };
    let value = match (method, base.parity()) {
        (Method::Auto, _) => u_auto(base, x, t, controls),
        (Method::Series, Parity::Odd(n)) => u_odd_series(n, x, t, controls),
        (Method::Series, Parity::Even(2)) => u4_series(x, t, controls),
        (Method::Series, Parity::Even(_)) => Err(mismatch()),
        (Method::Damped, Parity::Odd(n)) => u_odd_damped(n, x, t, controls),
        (Method::Damped, Parity::Even(n)) => u_even_damped(n, x, t, controls),
        (Method::Fourier, _) => u_fourier_oracle(base, x, t, controls),
        (Method::Airy, Parity::Odd(1)) => Ok(KernelValue {
            value: u3_airy(x, t)?,
            abs_err: 1e-13 * t.powf(-1.0 / 3.0),
            method: KernelMethod::AiryClosed,
            nodes: 1,
        }),
        (Method::Airy, _) => Err(mismatch()),
        (Method::Contour, Parity::Odd(n)) => u_odd_contour(n, x, t, controls),
        (Method::Contour, Parity::Even(_)) => Err(mismatch()),
    }?;
    if !value.value.is_finite() || !value.abs_err.is_finite() {
        return Err(Error::NonFinite {
            value: value.value,
            x,
            t,
        });
    }
    Ok(value)
}

/// Evaluates every point of the request; failures stay attached to their point.
pub fn evaluate(request: &EvalRequest) -> Vec<PointResult> {
    request
        .points
        .iter()
        .map(|&(x, t)| PointResult {
            x,
            t,
            outcome: evaluate_point(request.order, request.method, x, t, &request.controls),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn cross_method_agreement() {
        let c = NumericControls::default();
        let o3 = EquationOrder::new(3).unwrap();
        let airy = evaluate_point(o3, Method::Airy, 0.0, 1.0 / 3.0, &c).unwrap();
        assert!((airy.value - 0.355028053887817239).abs() < 1e-13);
        let o4 = EquationOrder::new(4).unwrap();
        let s = evaluate_point(o4, Method::Series, 0.0, 1.0, &c).unwrap();
        let d = evaluate_point(o4, Method::Damped, 0.0, 1.0, &c).unwrap();
        assert!((s.value - d.value).abs() < 1e-7);
        let g = evaluate_point(EquationOrder::new(2).unwrap(), Method::Auto, 1.0, 1.0, &c).unwrap();
        assert!((g.value - 0.21969564473386122).abs() < 1e-12);
    }

    #[test]
    fn incompatible_methods_are_errors() {
        let c = NumericControls::default();
        let o5 = EquationOrder::new(5).unwrap();
        let e = evaluate_point(o5, Method::Airy, 0.0, 1.0, &c).unwrap_err();
        assert_eq!(e.kind(), "method-mismatch");
        let o6 = EquationOrder::new(6).unwrap();
        assert!(evaluate_point(o6, Method::Series, 0.0, 1.0, &c).is_err());
        assert!(evaluate_point(o6, Method::Contour, 0.0, 1.0, &c).is_err());
        assert_eq!(
            evaluate_point(o5, Method::Auto, f64::NAN, 1.0, &c).unwrap_err().kind(),
            "invalid-parameter"
        );
        assert_eq!(
            evaluate_point(o5, Method::Auto, 0.0, -1.0, &c).unwrap_err().kind(),
            "invalid-time"
        );
    }

    #[test]
    fn mirror_reflects_every_method() {
        let c = NumericControls::default();
        let o5 = EquationOrder::new(5).unwrap();
        for method in [Method::Auto, Method::Series, Method::Damped, Method::Contour] {
            let a = evaluate_point(o5, method, 1.3, 1.0, &c).unwrap().value;
            let b = evaluate_point(o5.mirrored(), method, -1.3, 1.0, &c).unwrap().value;
            assert_eq!(a, b, "{method}");
        }
    }

    #[test]
    fn request_keeps_failures_per_point() {
        let o3 = EquationOrder::new(3).unwrap();
        let req = EvalRequest::new(o3, vec![(0.0, 1.0), (9.0, 1.0), (1.0, 1.0)]).with_method(Method::Series);
        let out = evaluate(&req);
        assert!(out[0].outcome.is_ok() && out[2].outcome.is_ok());
        assert_eq!(out[1].outcome.as_ref().unwrap_err().kind(), "method-range");
    }
}
