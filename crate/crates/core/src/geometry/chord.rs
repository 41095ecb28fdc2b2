use core::f64::consts::{PI, TAU};

use crate::series::{Evaluator, TimePoint};
use crate::{unit, ComplexPoint, Error, Result};

/// Allowance for floating-point error of a blocked sum on top of its
/// truncation bound.
const ROUNDOFF: f64 = 1e-14;

/// Certified increment `φ(t_{x0} + h/(2π)) - φ(t_{x0})` for an offset `h` in
/// `x` units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub h: f64,
    pub delta: ComplexPoint,
    /// Bound on `|delta - exact increment|`.
    pub bound: f64,
    pub terms: u64,
}

impl Chord {
    pub fn direction(&self) -> ComplexPoint {
        unit(self.delta).unwrap_or(ComplexPoint::new(1.0, 0.0))
    }
}

/// Anything that produces chords of a curve at a fixed base point.
pub trait ChordSource {
    /// The chord at offset `h`, or [`Error::UnresolvableChord`] when its
    /// magnitude does not clear the noise floor.
    fn chord(&self, h: f64) -> Result<Chord>;
}

/// Chords of `φ` at `t_{x0}`.
#[derive(Debug, Clone, Copy)]
pub struct PhiChords {
    pub x0: TimePoint,
    pub evaluator: Evaluator,
    /// Relative tolerance passed to `phi_delta`.
    pub rel_tol: f64,
    /// A chord is resolved when `|delta| > resolve_factor · bound`.
    pub resolve_factor: f64,
    /// Largest truncation index spent on one chord when refining; `0`
    /// disables refinement.
    pub budget: u64,
}

impl PhiChords {
    pub fn new(x0: TimePoint, rel_tol: f64) -> Self {
        Self {
            x0,
            evaluator: Evaluator::default(),
            rel_tol,
            resolve_factor: 10.0,
            budget: 0,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn raw(&self, h: f64, rel_tol: f64) -> Result<Chord> {
        let r = self.evaluator.phi_delta(self.x0, h / TAU, rel_tol)?;
        Ok(Chord {
            h,
            delta: r.value,
            bound: r.tail_bound + ROUNDOFF,
            terms: r.truncation_n,
        })
    }

    fn resolved(&self, c: &Chord) -> bool {
        c.delta.norm() > self.resolve_factor * c.bound
    }
}

impl ChordSource for PhiChords {
    fn chord(&self, h: f64) -> Result<Chord> {
        let c = self.raw(h, self.rel_tol)?;
        if self.resolved(&c) {
            return Ok(c);
        }
        // Aim for a bound 30% below what the current magnitude needs.
        let target = c.delta.norm() / (1.3 * self.resolve_factor) - ROUNDOFF;
        let needed = if target > 0.0 {
            1.0 / (PI * PI * target)
        } else {
            f64::INFINITY
        };
        if self.budget > 0 && needed <= self.budget as f64 && needed > c.terms as f64 {
            let rel = target / libm::sqrt(libm::fabs(h) / TAU);
            let c2 = self.raw(h, rel)?;
            if self.resolved(&c2) {
                return Ok(c2);
            }
            return Err(unresolvable(&c2, self.resolve_factor));
        }
        Err(unresolvable(&c, self.resolve_factor))
    }
}

fn unresolvable(c: &Chord, factor: f64) -> Error {
    Error::UnresolvableChord {
        h: c.h,
        magnitude: c.delta.norm(),
        bound: factor * c.bound,
    }
}

/// Unit direction of the chord of `φ` from `t_{x0}` to `t_{x0} + h/(2π)`.
pub fn chord_direction(x0: TimePoint, h: f64, rel_tol: f64) -> Result<ComplexPoint> {
    Ok(PhiChords::new(x0, rel_tol).chord(h)?.direction())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular_distance;

    #[test]
    fn directions_have_unit_modulus() {
        for h in [1e-3, -1e-5, 2e-7] {
            let d = chord_direction(TimePoint::from_x(0.31), h, 1e-3).unwrap();
            assert!((d.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn corner_at_zero_converges() {
        let x0 = TimePoint::rational(0, 1).unwrap();
        let a = chord_direction(x0, 1e-6, 1e-3).unwrap();
        let b = chord_direction(x0, 1e-8, 1e-3).unwrap();
        assert!(angular_distance(a, b) < 0.02);
    }

    #[test]
    fn spiral_at_half_turns() {
        let x0 = TimePoint::rational(1, 2).unwrap();
        let src = PhiChords::new(x0, 1e-3).with_budget(50_000_000);
        let mut h = 1e-2;
        let mut largest = 0.0f64;
        while h > 2e-4 {
            let a = src.chord(h).unwrap().direction();
            let b = src.chord(h / 4.0).unwrap().direction();
            largest = largest.max(angular_distance(a, b));
            h *= 0.8;
        }
        assert!(largest > 1.0, "{largest}");
    }

    #[test]
    fn tiny_chords_are_reported() {
        let src = PhiChords::new(TimePoint::rational(1, 2).unwrap(), 1e-2);
        assert!(matches!(src.chord(1e-6), Err(Error::UnresolvableChord { .. })));
        assert!(matches!(src.chord(1e-12), Err(Error::ResolutionFloor { .. })));
    }
}
