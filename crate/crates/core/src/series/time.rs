use core::f64::consts::TAU;

use num_integer::Integer;

use super::kernel::QuadPhase;
use crate::dd::{self, DoubleDouble};
use crate::{Error, Result};

/// Time variable of `φ`, optionally tagged with an exact rational `x = p/q`
/// when `t = t_x = x/(2π)`.
///
/// A tagged point reduces its phases `-4π²k²t = -2πk²p/q` exactly in integer
/// arithmetic, so the value is that of the exact rational point rather than of
/// the rounded `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimePoint {
    t: f64,
    exact: Option<(i64, u64)>,
}

impl TimePoint {
    /// Untagged time `t`.
    pub fn new(t: f64) -> Self {
        Self { t, exact: None }
    }

    /// Untagged `t = x/(2π)`.
    pub fn from_x(x: f64) -> Self {
        Self::new(dd::INV_TAU.mul_f64(x).to_f64())
    }

    /// Tagged `t = (p/q)/(2π)`; the fraction is reduced.
    pub fn rational(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = (p.unsigned_abs()).gcd(&q);
        let (p, q) = (p / g as i64, q / g);
        let t = dd::INV_TAU.mul_f64(p as f64 / q as f64).to_f64();
        Ok(Self {
            t,
            exact: Some((p, q)),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `x = 2πt`, exact for tagged points.
    pub fn x(&self) -> f64 {
        match self.exact {
            Some((p, q)) => p as f64 / q as f64,
            None => self.t * TAU,
        }
    }

    pub fn exact(&self) -> Option<(i64, u64)> {
        self.exact
    }

    /// Phase coefficient of `e^{-4π²ik²t} = e(a k²)`, i.e. `a = -2πt = -x`.
    pub(crate) fn phase(&self) -> QuadPhase {
        match self.exact {
            Some((p, q)) => QuadPhase::rational(-p, q),
            None => QuadPhase::real(dd::TAU.mul_f64(self.t).neg()),
        }
    }
}

impl From<f64> for TimePoint {
    fn from(t: f64) -> Self {
        Self::new(t)
    }
}

/// Splits `t = (x + winding)/(2π)` with `x ∈ [0, 1)`.
///
/// `φ(t) = φ(x/(2π)) + i·winding/(2π)` by quasi-periodicity. Values of `x`
/// within the rounding of `t` of an integer snap to it.
pub fn reduce_time(t: f64) -> (f64, i64) {
    let full = dd::TAU.mul_f64(t);
    let slack = 4.0 * f64::EPSILON * libm::fabs(full.hi).max(1.0);
    let mut winding = full.floor();
    let mut x = DoubleDouble {
        hi: full.hi - winding,
        lo: full.lo,
    }
    .to_f64();
    if x >= 1.0 - slack {
        x = 0.0;
        winding += 1.0;
    } else if x < slack {
        x = 0.0;
    }
    (x, winding as i64)
}
