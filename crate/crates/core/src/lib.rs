//! Fundamental solutions of `du/dt = kappa_m d^m u/dx^m` and the stable laws
//! obtained by subordinating the associated pseudo-processes.
//!
//! The crate is organised bottom-up:
//!
//! * [`order`], [`controls`], [`laws`] and [`eval`] hold the domain types
//!   shared by every evaluator.
//! * [`quad`] is the adaptive Gauss–Kronrod engine plus the oscillatory-tail
//!   summation used for conditionally convergent integrals.
//! * [`special`] provides gamma, Airy `Ai`, Mittag-Leffler and the damped
//!   oscillation kernel.
//! * [`kernels`] evaluates `u_m(x, t)` by series, damped-oscillation
//!   quadrature, Airy closed form and Fourier inversion.
//! * [`stable`] covers characteristic functions, subordinator densities,
//!   compositions and samplers.
//! * [`fractional`] covers the fractional advection density `q_alpha` and its
//!   transform identities.
//! * [`verify`] bundles the cross-module identities into a report, and
//!   [`cli`] exposes everything on the command line.

pub mod cli;
pub mod controls;
pub mod error;
pub mod eval;
pub mod fractional;
pub mod kernels;
pub mod laws;
pub mod order;
pub mod quad;
pub mod special;
pub mod stable;
pub mod verify;

pub use controls::NumericControls;
pub use error::{Error, Result};
pub use eval::{evaluate, evaluate_point, EvalRequest, Method, PointResult};
pub use kernels::{KernelMethod, KernelValue};
pub use laws::{GenGammaLaw, StableLaw};
pub use order::{EquationOrder, Parity};
