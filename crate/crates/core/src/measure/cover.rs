use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::diophantine::{convergents, totients, CFExpansion, Convergent, FareyIter, Rational};
use crate::error::invalid;
use crate::series::{Evaluator, TimePoint};
use crate::{ComplexPoint, Error, Result};

/// Ball `B(φ(t_{p/q}), C q^{-e})`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverBall {
    pub center: ComplexPoint,
    pub frac: Rational,
    pub radius: f64,
    pub exponent: f64,
}

/// Balls around `φ(t_{p/q})` for every irreducible `p/q ∈ (0, 1)` with
/// `q0 ≤ q ≤ qmax`. Centers are evaluated on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverBallSet {
    pub q0: u64,
    pub qmax: u64,
    pub c_used: f64,
    pub exponent: f64,
    pub evaluator: Evaluator,
}

pub fn build_cover(q0: u64, qmax: u64, c_used: f64, exponent: f64) -> Result<CoverBallSet> {
    if q0 < 2 || q0 > qmax {
        return Err(invalid("q0", "need 2 <= q0 <= qmax"));
    }
    if !(c_used > 0.0 && c_used.is_finite()) {
        return Err(invalid("c_used", "must be positive"));
    }
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(invalid("exponent", "must be positive"));
    }
    Ok(CoverBallSet {
        q0,
        qmax,
        c_used,
        exponent,
        evaluator: Evaluator::default(),
    })
}

impl CoverBallSet {
    pub fn radius(&self, q: u64) -> f64 {
        self.c_used * libm::pow(q as f64, -self.exponent)
    }

    /// Number of balls, `Σ totient(q)`.
    pub fn len(&self) -> u64 {
        totients(self.qmax as usize)[self.q0 as usize..].iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index pairs `(p, q)` in order of `q`, then `p`.
    pub fn fractions(&self) -> FareyIter {
        FareyIter::new(self.q0, self.qmax).expect("validated range")
    }

    /// The ball at `p/q`, centered to accuracy `radius/100`.
    pub fn ball(&self, p: u64, q: u64) -> Result<CoverBall> {
        if q < self.q0 || q > self.qmax || p == 0 || p >= q || p.gcd(&q) != 1 {
            return Err(invalid("p/q", "not an index of this cover"));
        }
        let radius = self.radius(q);
        let center = self
            .evaluator
            .phi(TimePoint::rational(p as i64, q)?, radius / 100.0)?
            .value;
        Ok(CoverBall {
            center,
            frac: Rational::from_reduced(p.into(), q.into()),
            radius,
            exponent: self.exponent,
        })
    }

    pub fn balls(&self) -> impl Iterator<Item = Result<CoverBall>> + '_ {
        self.fractions().map(move |(p, q)| self.ball(p, q))
    }
}

/// Check of one point against the ball of one of its convergents.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageEntry {
    pub rho: f64,
    /// Convergent numerator reduced into `(0, q)`.
    pub p: u64,
    pub q: u64,
    /// `ρ - p_n/q_n` in `x` units.
    pub h: f64,
    pub distance: f64,
    /// Error bound of `distance`.
    pub bound: f64,
    pub radius: f64,
    pub covered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub entries: Vec<CoverageEntry>,
    pub passed: usize,
    pub failed: usize,
}

/// For each `ρ`, checks `|φ(t_ρ) - φ(t_{p_n/q_n})| ≤ C q_n^{-e}` at the
/// deepest convergent with `q0 ≤ q_n ≤ qmax` and `|ρ - p_n/q_n|` above the
/// evaluator's floor (in `x` units); a point counts as covered only
/// if the distance plus its error bound stays inside the radius.
pub fn verify_cover(cover: &CoverBallSet, irrationals: &[CFExpansion]) -> Result<CoverageReport> {
    let entries = irrationals
        .iter()
        .map(|rho| check_point(cover, rho))
        .collect::<Result<Vec<_>>>()?;
    let passed = entries.iter().filter(|e| e.covered).count();
    Ok(CoverageReport {
        failed: entries.len() - passed,
        passed,
        entries,
    })
}

/// Relative width accepted for the enclosure of `ρ - p_n/q_n`.
const ENCLOSURE_REL: f64 = 1e-15;

fn check_point(cover: &CoverBallSet, rho: &CFExpansion) -> Result<CoverageEntry> {
    let (c, width) = pick_convergent(cover, rho)?;
    let q = c.frac.q().to_u64().expect("q <= qmax");
    let p_raw = c.frac.p().mod_floor(&c.frac.q().clone()).to_u64().expect("p < q");
    let lo = c.error.0.to_f64().unwrap_or(0.0);
    let h = c.sign as f64 * lo;
    let radius = cover.radius(q);
    let (distance, bound) = if c.sign == 0 {
        (0.0, 0.0)
    } else {
        let t_h = h / TAU;
        let rel = radius / 100.0 / libm::sqrt(libm::fabs(t_h));
        let d = cover
            .evaluator
            .phi_delta(TimePoint::rational(p_raw as i64, q)?, t_h, rel)?;
        (d.value.norm(), d.tail_bound + width)
    };
    Ok(CoverageEntry {
        rho: rho.to_f64(),
        p: p_raw,
        q,
        h,
        distance,
        bound,
        radius,
        covered: distance + bound <= radius,
    })
}

/// Deepest convergent in range whose offset is above the evaluator's floor,
/// and a bound on the chord change caused by the uncertainty of its offset.
fn pick_convergent(cover: &CoverBallSet, rho: &CFExpansion) -> Result<(Convergent, f64)> {
    let not_testable = Error::NotTestable {
        q0: cover.q0,
        qmax: cover.qmax,
    };
    let floor = TAU * cover.evaluator.config.h_floor;
    let mut depth = 8usize;
    loop {
        let d = rho
            .available()
            .map_or(depth, |a| depth.min(if rho.is_terminated() { a + 1 } else { a }));
        let all = convergents(rho, d)?;
        let mut in_range = all
            .iter()
            .rev()
            .filter(|c| c.frac.q().to_u64().is_some_and(|q| q >= cover.q0 && q <= cover.qmax))
            .peekable();
        let deepest = in_range.peek().map(|c| c.error.0.to_f64().unwrap_or(0.0));
        let mut in_range = in_range.filter(|c| c.error.0.is_zero() || c.error.0.to_f64().unwrap_or(0.0) >= floor);
        let beyond = all.last().is_some_and(|c| c.frac.q().to_u64().map_or(true, |q| q > cover.qmax));
        let exhausted = d < depth || rho.is_terminated() && d >= all.len();
        if beyond || exhausted {
            let c = match (in_range.next(), deepest) {
                (Some(c), _) => c,
                (None, Some(h)) => return Err(Error::ResolutionFloor { h, floor }),
                (None, None) => return Err(not_testable),
            };
            let (lo, hi) = (&c.error.0, &c.error.1);
            let width = (hi - lo).to_f64().unwrap_or(f64::INFINITY);
            let tight = lo.is_zero() && hi.is_zero() || width <= ENCLOSURE_REL * lo.to_f64().unwrap_or(0.0);
            if tight {
                // |φ(t + s) - φ(t)| ≤ 2√|s| for small s.
                return Ok((c.clone(), 2.0 * libm::sqrt(width)));
            }
            if exhausted {
                return Err(Error::InsufficientPrecision {
                    requested: depth,
                    available: all.len(),
                });
            }
        }
        if depth > 1 << 14 {
            return Err(not_testable);
        }
        depth *= 2;
    }
}
