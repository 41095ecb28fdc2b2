use alloc::vec::Vec;

use crate::error::invalid;
use crate::{Error, Result};

/// Which offsets of a schedule are visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
    Both,
}

impl Side {
    pub(crate) fn signs(self) -> &'static [f64] {
        match self {
            Side::Right => &[1.0],
            Side::Left => &[-1.0],
            Side::Both => &[1.0, -1.0],
        }
    }
}

/// Geometric offsets `h_n = h0 · ratio^n`, `n < count`, in `x` units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSchedule {
    pub h0: f64,
    pub ratio: f64,
    pub count: usize,
    pub side: Side,
}

impl HSchedule {
    pub fn new(h0: f64, ratio: f64, count: usize, side: Side) -> Result<Self> {
        if !(h0 > 0.0 && h0.is_finite()) {
            return Err(invalid("h0", "must be positive and finite"));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(invalid("ratio", "must lie in (0, 1)"));
        }
        if count == 0 {
            return Err(invalid("count", "must be positive"));
        }
        Ok(Self {
            h0,
            ratio,
            count,
            side,
        })
    }

    /// Runs from `h_max` down to exactly `h_min`, with the ratio adjusted
    /// from `ratio` so that the endpoints are hit.
    pub fn spanning(h_max: f64, h_min: f64, ratio: f64, side: Side) -> Result<Self> {
        if !(h_min > 0.0 && h_min < h_max) {
            return Err(invalid("h_min", "need 0 < h_min < h_max"));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(invalid("ratio", "must lie in (0, 1)"));
        }
        let span = libm::log(h_min / h_max);
        let steps = libm::round(span / libm::log(ratio)).max(1.0);
        let ratio = libm::exp(span / steps);
        Self::new(h_max, ratio, steps as usize + 1, side)
    }

    pub fn h_min(&self) -> f64 {
        self.h(self.count - 1)
    }

    pub fn h(&self, n: usize) -> f64 {
        self.h0 * libm::pow(self.ratio, n as f64)
    }

    /// Offset magnitudes, largest first.
    pub fn magnitudes(&self) -> Vec<f64> {
        (0..self.count).map(|n| self.h(n)).collect()
    }

    /// Signed offsets: all right-hand ones, then all left-hand ones.
    pub fn offsets(&self) -> Vec<f64> {
        let m = self.magnitudes();
        self.side
            .signs()
            .iter()
            .flat_map(|s| m.iter().map(move |h| s * h))
            .collect()
    }

    /// Checks every offset against a floor in `x` units.
    pub fn check_floor(&self, floor_x: f64) -> Result<()> {
        let h = self.h_min();
        if h < floor_x {
            return Err(Error::ResolutionFloor { h, floor: floor_x });
        }
        Ok(())
    }

    /// Checks `h_n ≤ limit` for every offset.
    pub fn check_max(&self, limit: f64) -> Result<()> {
        // Relative slack for the rounding of 1/q².
        if self.h0 > limit * (1.0 + 1e-12) {
            return Err(Error::OutsideLemmaRange { h: self.h0, limit });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spanning_hits_both_ends() {
        let s = HSchedule::spanning(1e-2, 1e-7, 0.9, Side::Both).unwrap();
        assert_eq!(s.h0, 1e-2);
        assert!((s.h_min() / 1e-7 - 1.0).abs() < 1e-9);
        assert!((s.ratio - 0.9).abs() < 0.01);
        assert_eq!(s.offsets().len(), 2 * s.count);
        assert!(s.offsets()[s.count] < 0.0);
    }

    #[test]
    fn validation() {
        assert!(HSchedule::new(0.0, 0.5, 3, Side::Right).is_err());
        assert!(HSchedule::new(1.0, 1.0, 3, Side::Right).is_err());
        assert!(HSchedule::new(1.0, 0.5, 0, Side::Right).is_err());
        let s = HSchedule::new(1e-3, 0.1, 10, Side::Left).unwrap();
        assert!(matches!(s.check_floor(1e-9), Err(Error::ResolutionFloor { .. })));
        assert!(s.check_max(1.0 / 9.0).is_ok());
        assert!(s.check_max(1e-4).is_err());
    }
}
