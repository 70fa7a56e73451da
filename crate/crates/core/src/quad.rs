//! Adaptive Gauss–Kronrod quadrature and sequence acceleration.
//!
//! The integrator is the classic globally adaptive 21-point Gauss–Kronrod
//! scheme: the interval with the largest error estimate is bisected until the
//! summed estimate meets `max(abs_tol, rel_tol * |I|)`. It is generic over the
//! integrand's value type so the contour integrals in [`crate::kernels`] can
//! integrate complex functions directly.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525478276,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Values an integrand may return.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T = f64> {
    pub value: T,
    pub abs_err: f64,
    pub evals: usize,
    pub converged: bool,
}

impl<T: QuadValue> QuadResult<T> {
    /// Turns a non-converged result into [`Error::Quadrature`].
    pub fn checked(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::Quadrature {
                estimate: self.abs_err,
                evals: self.evals,
            })
        }
    }
}

/// Tolerances and subdivision budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_intervals: 4000,
        }
    }

    pub fn with_max_intervals(self, max_intervals: usize) -> Self {
        Self {
            max_intervals,
            ..self
        }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl<T> Eq for Segment<T> {}

impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[10];
    let mut gauss = T::zero();
    let mut abs_sum = fc.magnitude() * WGK[10];
    let mut values = [T::zero(); 21];
    values[10] = fc;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = f1;
        values[20 - j] = f2;
        kron = kron + (f1 + f2) * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        asc += WGK[j] * ((values[j] - mean).magnitude() + (values[20 - j] - mean).magnitude());
    }
    let value = kron * half;
    let resasc = asc * half.abs();
    let resabs = abs_sum * half.abs();
    let mut err = ((kron - gauss) * half).magnitude();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && round > err {
        err = round;
    }
    (value, err)
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_breaks(f, &[a, b], tol)
}

/// Integrates `f` over the union of `[breaks[i], breaks[i+1]]`; the break
/// points seed the subdivision (oscillation zeros, kinks, scale changes).
pub fn integrate_breaks<T, F>(mut f: F, breaks: &[f64], tol: Tolerance) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    let mut evals = 0;
    for w in breaks.windows(2) {
        if w[1] == w[0] {
            continue;
        }
        let (value, err) = kronrod(&mut f, w[0], w[1]);
        evals += 21;
        total = total + value;
        total_err += err;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            err,
        });
    }
    let budget = tol.max_intervals.max(heap.len());
    loop {
        let target = tol.abs.max(tol.rel * total.magnitude());
        if total_err <= target {
            break;
        }
        if heap.len() >= budget {
            return QuadResult {
                value: total,
                abs_err: total_err,
                evals,
                converged: false,
            };
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further; keep the estimate and stop
            heap.push(worst);
            return QuadResult {
                value: total,
                abs_err: total_err,
                evals,
                converged: false,
            };
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid);
        let (v2, e2) = kronrod(&mut f, mid, worst.b);
        evals += 42;
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.err;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
    }
    // re-sum to shed the drift of the running updates
    let mut value = T::zero();
    let mut abs_err = 0.0;
    for seg in heap.iter() {
        value = value + seg.value;
        abs_err += seg.err;
    }
    QuadResult {
        value,
        abs_err,
        evals,
        converged: true,
    }
}

/// Integrates `f` over `[a, inf)` through `x = a + s / (1 - s)`.
pub fn integrate_to_infinity<T, F>(mut f: F, a: f64, tol: Tolerance) -> QuadResult<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate(
        move |s: f64| {
            if s >= 1.0 {
                return T::zero();
            }
            let one_minus = 1.0 - s;
            let x = a + s / one_minus;
            let v = f(x);
            if v.magnitude() == 0.0 {
                v
            } else {
                v * (1.0 / (one_minus * one_minus))
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Limit of a sequence of partial sums by Wynn's epsilon algorithm.
///
/// Returns the extrapolated limit and the difference between the two most
/// recent even-column estimates as an error indicator.
pub fn wynn_epsilon(partial: &[f64]) -> (f64, f64) {
    let n = partial.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (partial[0], f64::INFINITY),
        2 => return (partial[1], (partial[1] - partial[0]).abs()),
        _ => {}
    }
    // column k holds eps_k^{(j)} for j = 0..n-k
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial.to_vec();
    let mut best = partial[n - 1];
    let mut best_err = (partial[n - 1] - partial[n - 2]).abs();
    let mut k = 0;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broke = false;
        for j in 0..cur.len() - 1 {
            let diff = cur[j + 1] - cur[j];
            if diff == 0.0 || !diff.is_finite() {
                broke = true;
                break;
            }
            next.push(prev[j + 1] + 1.0 / diff);
        }
        if broke {
            break;
        }
        k += 1;
        if k % 2 == 0 && next.len() >= 2 {
            let last = next[next.len() - 1];
            let err = (last - next[next.len() - 2]).abs();
            if err.is_finite() && err <= best_err {
                best = last;
                best_err = err;
            }
        }
        prev = cur;
        cur = next;
    }
    (best, best_err)
}

/// Sums `piece(0) + piece(1) + ...` for a slowly convergent, roughly
/// alternating series of sub-integrals, accelerating with [`wynn_epsilon`].
pub fn sum_alternating<F>(mut piece: F, min_pieces: usize, max_pieces: usize, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(usize) -> Result<f64>,
{
    let mut partial = Vec::with_capacity(max_pieces);
    let mut sum = 0.0;
    let mut last = f64::NAN;
    let mut stable_hits = 0;
    for k in 0..max_pieces {
        sum += piece(k)?;
        partial.push(sum);
        if k + 1 < min_pieces {
            continue;
        }
        let window = &partial[partial.len().saturating_sub(40)..];
        let (limit, err) = wynn_epsilon(window);
        if (limit - last).abs() <= tol && err <= tol {
            stable_hits += 1;
            if stable_hits >= 3 {
                return Ok((limit, err.max((limit - last).abs())));
            }
        } else {
            stable_hits = 0;
        }
        last = limit;
    }
    Err(Error::Numeric(format!(
        "oscillatory tail did not settle after {max_pieces} pieces"
    )))
}
