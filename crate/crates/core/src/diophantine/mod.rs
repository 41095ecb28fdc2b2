//! Exact rationals, continued fractions, convergents and their approximation
//! exponents, and Farey enumeration.

mod cf;
mod convergent;
mod farey;
mod rational;

pub use cf::{cf_expand, CFExpansion, CfInput, CfSource};
pub use convergent::{
    convergents, gamma_limsup, gamma_limsup_window, holder_exponent, Convergent, ExponentTarget,
    GammaEstimate, DEFAULT_WINDOW,
};
pub use farey::{farey_enumerate, totients, FareyIter};
pub use rational::{make_rational, Rational};
