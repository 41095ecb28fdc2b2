//! Evaluation and geometric analysis of Riemann's non-differentiable function.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every numerical
//! algorithm of the project:
//!
//! * [`series`]: certified truncated sums for `R(x) = Σ sin(n²x)/n²`, its
//!   complex relative `φ_D(t) = Σ e^{iπn²t}/(iπn²)` and
//!   `φ(t) = Σ_{k∈ℤ} (e^{-4π²ik²t} - 1)/(-4π²k²)`, plus a direct evaluator for
//!   increments `φ(t+h) - φ(t)`.
//! * [`diophantine`]: exact rationals, continued fractions, convergents and
//!   their approximation exponents, Farey enumeration.
//! * [`geometry`]: chord directions near a point of the image curve (corners,
//!   spirals, direction clusters) and the empirical Hölder-type constant.
//! * [`measure`]: image traces, box counting, the Farey ball cover and its
//!   α-content sums, 1-Hausdorff content of curve pieces and cone tests.
//!
//! Everything is a pure function of its inputs. IO, the command line and the
//! FFT-accelerated grid tracer live in the `riemann` crate.
#![cfg_attr(not(test), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod dd;
mod error;
mod point;

pub mod diophantine;
pub mod geometry;
pub mod measure;
pub mod series;

pub use error::{Error, Result};
pub use point::{angular_distance, unit, wrap_angle, ComplexPoint};
pub use series::{
    eval_phi, eval_phi_d, eval_r, phi_delta, reduce_time, EvalResult, Evaluator, SeriesConfig,
    TimePoint,
};

/// Library version, echoed into every artifact written by the CLI.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
