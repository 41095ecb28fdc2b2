//! Certified truncated sums for `R`, `φ_D`, `φ` and increments of `φ`.
//!
//! The `±k` terms of `φ` coincide, so `φ` is summed over `k ≥ 1` with weight
//! 2 plus the `k = 0` term `i·t` (the limit of the summand as `k → 0`):
//!
//! ```text
//! φ(t) = i t + Σ_{k≥1} (1 - e^{-4π²ik²t}) / (2π²k²)
//! ```
//!
//! Each paired summand is bounded by `1/(π²k²)`, so truncating after `N`
//! terms leaves a tail below `1/(π²N)`. `R` and `φ_D` use the analogous bounds
//! `1/N` and `1/(πN)`.

mod kernel;
mod time;

use alloc::vec::Vec;
use core::f64::consts::PI;

use kernel::{quad_sum, quad_sums, QuadPhase};
pub use time::{reduce_time, TimePoint};

use crate::dd::{self, DoubleDouble};
use crate::point::is_finite;
use crate::error::invalid;
use crate::{ComplexPoint, Error, Result};

/// Value of a truncated series together with its certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T = ComplexPoint> {
    pub value: T,
    /// Number of summed terms; `0` when the value is a closed form (every
    /// phase is an integer number of turns).
    pub truncation_n: u64,
    /// Upper bound on `|value - series|` from truncation.
    pub tail_bound: f64,
}

/// Limits shared by all evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Largest admissible truncation index.
    pub max_terms: u64,
    /// Smallest admissible `|h|` (in `t` units) for [`phi_delta`].
    pub h_floor: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_terms: 20_000_000_000,
            h_floor: 1e-10,
        }
    }
}

/// Series evaluator carrying a [`SeriesConfig`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Evaluator {
    pub config: SeriesConfig,
}

fn check_tol(name: &'static str, tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, "must be positive and finite"))
    }
}

impl Evaluator {
    pub fn new(config: SeriesConfig) -> Self {
        Self { config }
    }

    fn terms_for(&self, tol: f64, required: f64) -> Result<u64> {
        let n = libm::ceil(required);
        if !(n <= self.config.max_terms as f64) {
            return Err(Error::InfeasibleTolerance {
                tol,
                required: n,
                cap: self.config.max_terms,
            });
        }
        Ok((n as u64).max(1))
    }

    /// `R(x) = Σ_{n≥1} sin(n²x)/n²` to absolute accuracy `tol`.
    pub fn r(&self, x: f64, tol: f64) -> Result<EvalResult<f64>> {
        check_tol("tol", tol)?;
        if !x.is_finite() {
            return Err(invalid("x", "must be finite"));
        }
        let phase = QuadPhase::real(dd::INV_TAU.mul_f64(x));
        if phase.is_trivial() {
            return Ok(EvalResult {
                value: 0.0,
                truncation_n: 0,
                tail_bound: 0.0,
            });
        }
        let n = self.terms_for(tol, 1.0 / tol)?;
        let s = quad_sum(&[phase], &[1.0], n);
        Ok(EvalResult {
            value: s.oscillatory.im,
            truncation_n: n,
            tail_bound: 1.0 / n as f64,
        })
    }

    /// `φ_D(t) = Σ_{n≥1} e^{iπn²t}/(iπn²)` to absolute accuracy `tol`.
    pub fn phi_d(&self, t: f64, tol: f64) -> Result<EvalResult> {
        check_tol("tol", tol)?;
        if !t.is_finite() {
            return Err(invalid("t", "must be finite"));
        }
        self.phi_d_phase(QuadPhase::real(DoubleDouble::from_f64(t * 0.5)), tol)
    }

    /// `φ_D` at the exact rational `p/q`.
    pub fn phi_d_rational(&self, p: i64, q: u64, tol: f64) -> Result<EvalResult> {
        check_tol("tol", tol)?;
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        // e^{iπn²p/q} = e(n² p/(2q))
        self.phi_d_phase(QuadPhase::rational(p, 2 * q), tol)
    }

    fn phi_d_phase(&self, phase: QuadPhase, tol: f64) -> Result<EvalResult> {
        // 1/(iπ) = -i/π
        if phase.is_trivial() {
            return Ok(EvalResult {
                value: ComplexPoint::new(0.0, -PI / 6.0),
                truncation_n: 0,
                tail_bound: 0.0,
            });
        }
        let n = self.terms_for(tol, 1.0 / (PI * tol))?;
        let s = quad_sum(&[phase], &[1.0], n).oscillatory;
        let value = ComplexPoint::new(s.im / PI, -s.re / PI);
        finite(EvalResult {
            value,
            truncation_n: n,
            tail_bound: 1.0 / (PI * n as f64),
        })
    }

    /// `φ(t)` to absolute accuracy `tol`.
    pub fn phi(&self, t: TimePoint, tol: f64) -> Result<EvalResult> {
        check_tol("tol", tol)?;
        if !t.t().is_finite() {
            return Err(invalid("t", "must be finite"));
        }
        let k0 = ComplexPoint::new(0.0, t.t());
        let phase = t.phase();
        if phase.is_trivial() {
            return Ok(EvalResult {
                value: k0,
                truncation_n: 0,
                tail_bound: 0.0,
            });
        }
        let n = self.terms_for(tol, 1.0 / (PI * PI * tol))?;
        let s = quad_sum(&[phase], &[1.0], n);
        phi_result(t, s.oscillatory, s.weights, n)
    }

    /// [`Evaluator::phi`] at several points, sharing the summation loop
    /// between pairs. Each value equals the one `phi` returns.
    pub fn phi_many(&self, ts: &[TimePoint], tol: f64) -> Result<Vec<EvalResult>> {
        check_tol("tol", tol)?;
        if ts.iter().any(|t| !t.t().is_finite()) {
            return Err(invalid("t", "must be finite"));
        }
        let n = self.terms_for(tol, 1.0 / (PI * PI * tol))?;
        let mut out = Vec::with_capacity(ts.len());
        let mut pending: Vec<TimePoint> = Vec::with_capacity(2);
        let flush = |pending: &mut Vec<TimePoint>, out: &mut Vec<EvalResult>| -> Result<()> {
            match pending.as_slice() {
                [a, b] => {
                    let (s, w) = quad_sums(&[a.phase(), b.phase()], n);
                    out.push(phi_result(*a, s[0], w, n)?);
                    out.push(phi_result(*b, s[1], w, n)?);
                }
                [a] => {
                    let (s, w) = quad_sums(&[a.phase()], n);
                    out.push(phi_result(*a, s[0], w, n)?);
                }
                _ => {}
            }
            pending.clear();
            Ok(())
        };
        // Trivial phases keep their closed form and their position.
        for &t in ts {
            if t.phase().is_trivial() {
                flush(&mut pending, &mut out)?;
                out.push(EvalResult {
                    value: ComplexPoint::new(0.0, t.t()),
                    truncation_n: 0,
                    tail_bound: 0.0,
                });
            } else {
                pending.push(t);
                if pending.len() == 2 {
                    flush(&mut pending, &mut out)?;
                }
            }
        }
        flush(&mut pending, &mut out)?;
        Ok(out)
    }

    /// `φ(t0 + h) - φ(t0)` summed term by term, with absolute accuracy
    /// `rel_tol · √|h|` (`h` in `t` units).
    pub fn phi_delta(&self, t0: TimePoint, h: f64, rel_tol: f64) -> Result<EvalResult> {
        check_tol("rel_tol", rel_tol)?;
        if !h.is_finite() || !t0.t().is_finite() {
            return Err(invalid("h", "must be finite"));
        }
        if h == 0.0 {
            return Ok(EvalResult {
                value: ComplexPoint::new(0.0, 0.0),
                truncation_n: 0,
                tail_bound: 0.0,
            });
        }
        if h.abs() < self.config.h_floor {
            return Err(Error::ResolutionFloor {
                h,
                floor: self.config.h_floor,
            });
        }
        let tol = rel_tol * libm::sqrt(h.abs());
        let n = self.terms_for(tol, 1.0 / (PI * PI * tol))?;
        let a0 = t0.phase();
        let a1 = a0.shifted(dd::TAU.mul_f64(h).neg());
        // Σ (e(a0 k²) - e(a1 k²)) / (2π²k²) + i h
        let s = quad_sum(&[a0, a1], &[1.0, -1.0], n).oscillatory;
        let scale = 1.0 / (2.0 * PI * PI);
        let value = ComplexPoint::new(s.re * scale, s.im * scale + h);
        finite(EvalResult {
            value,
            truncation_n: n,
            tail_bound: 1.0 / (PI * PI * n as f64),
        })
    }
}

/// `i t + Σ (1 - e(a k²)) / (2π²k²)` from the oscillatory and weight sums.
fn phi_result(t: TimePoint, osc: ComplexPoint, weights: f64, n: u64) -> Result<EvalResult> {
    let scale = 1.0 / (2.0 * PI * PI);
    let value = ComplexPoint::new((weights - osc.re) * scale, t.t() - osc.im * scale);
    finite(EvalResult {
        value,
        truncation_n: n,
        tail_bound: 1.0 / (PI * PI * n as f64),
    })
}

fn finite(r: EvalResult) -> Result<EvalResult> {
    if is_finite(r.value) {
        Ok(r)
    } else {
        Err(invalid("value", "non-finite result"))
    }
}

/// [`Evaluator::r`] with the default configuration.
pub fn eval_r(x: f64, tol: f64) -> Result<EvalResult<f64>> {
    Evaluator::default().r(x, tol)
}

/// [`Evaluator::phi_d`] with the default configuration.
pub fn eval_phi_d(t: f64, tol: f64) -> Result<EvalResult> {
    Evaluator::default().phi_d(t, tol)
}

/// [`Evaluator::phi`] with the default configuration.
pub fn eval_phi(t: impl Into<TimePoint>, tol: f64) -> Result<EvalResult> {
    Evaluator::default().phi(t.into(), tol)
}

/// [`Evaluator::phi_delta`] with the default configuration.
pub fn phi_delta(t0: impl Into<TimePoint>, h: f64, rel_tol: f64) -> Result<EvalResult> {
    Evaluator::default().phi_delta(t0.into(), h, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batched_values_match_single_evaluations() {
        let ev = Evaluator::default();
        let ts = [
            TimePoint::new(0.3),
            TimePoint::rational(0, 1).unwrap(),
            TimePoint::rational(1, 3).unwrap(),
            TimePoint::new(-1.7),
            TimePoint::from_x(0.71),
        ];
        let many = ev.phi_many(&ts, 1e-6).unwrap();
        assert_eq!(many.len(), ts.len());
        for (t, m) in ts.iter().zip(&many) {
            assert_eq!(*m, ev.phi(*t, 1e-6).unwrap());
        }
        assert!(ev.phi_many(&[TimePoint::new(f64::NAN)], 1e-6).is_err());
    }
    use core::f64::consts::{FRAC_PI_2, TAU};

    /// Plain `f64` summation used as an independent oracle: `sin` of the
    /// unreduced argument, natural summation order.
    fn naive_r(x: f64, n: u64) -> f64 {
        (1..=n)
            .map(|k| {
                let k = k as f64;
                (k * k * x).sin() / (k * k)
            })
            .sum()
    }

    fn naive_phi(t: f64, n: u64) -> ComplexPoint {
        let mut s = ComplexPoint::new(0.0, t);
        for k in 1..=n {
            let k = k as f64;
            let a = -4.0 * PI * PI * k * k * t;
            s += (ComplexPoint::new(1.0, 0.0) - ComplexPoint::from_polar(1.0, a)) / (2.0 * PI * PI * k * k);
        }
        s
    }

    fn naive_phi_d(t: f64, n: u64) -> ComplexPoint {
        let mut s = ComplexPoint::new(0.0, 0.0);
        for k in 1..=n {
            let k = k as f64;
            s += ComplexPoint::from_polar(1.0, PI * k * k * t) / ComplexPoint::new(0.0, PI * k * k);
        }
        s
    }

    #[test]
    fn r_vanishes_at_zero_and_is_odd() {
        let r0 = eval_r(0.0, 1e-12).unwrap();
        assert_eq!(r0.value, 0.0);
        let a = eval_r(0.7, 1e-7).unwrap();
        let b = eval_r(-0.7, 1e-7).unwrap();
        assert!((a.value + b.value).abs() < 1e-14, "{} {}", a.value, b.value);
        // Reference value from 40-digit summation of the first 10^6 terms.
        let c = eval_r(0.7, 1e-6).unwrap();
        assert!((c.value - 0.663_708_309_344_250_7).abs() < 1e-15);
    }

    #[test]
    fn r_at_half_pi_is_pi_squared_over_eight() {
        // sin(n²π/2) is 1 for odd n and 0 for even n; the double nearest π/2
        // moves the value by O(√ulp), well inside the oracle's 1e-6.
        let r = eval_r(FRAC_PI_2, 1e-10).unwrap();
        assert_eq!(r.truncation_n, 10_000_000_000);
        assert!(r.tail_bound <= 1e-10);
        let oracle = naive_r(FRAC_PI_2, 1_000_000);
        assert!((r.value - oracle).abs() <= 1e-6 + 1e-10, "{} vs {}", r.value, oracle);
        assert!((r.value - PI * PI / 8.0).abs() <= 1e-6);
    }

    #[test]
    fn phi_d_closed_form_at_zero() {
        let v = eval_phi_d(0.0, 1e-12).unwrap();
        assert_eq!(v.value, ComplexPoint::new(0.0, -PI / 6.0));
        assert!((v.value.im + core::f64::consts::FRAC_PI_6).abs() < 1e-7);
    }

    #[test]
    fn phi_d_is_two_periodic() {
        let tol = 1e-8;
        let a = eval_phi_d(0.37, tol).unwrap().value;
        let b = eval_phi_d(2.37, tol).unwrap().value;
        assert!((a - b).norm() <= 2.0 * tol);
    }

    #[test]
    fn real_part_of_phi_d_is_scaled_r() {
        let tol = 1e-7;
        let d = eval_phi_d(0.3, tol).unwrap().value;
        let r = eval_r(0.3 * PI, tol).unwrap().value;
        assert!((d.re - r / PI).abs() <= 2.0 * tol);
        // independent summation
        let oracle = naive_phi_d(0.3, 200_000);
        assert!((d - oracle).norm() <= tol + 1.0 / (PI * 200_000.0));
    }

    #[test]
    fn phi_at_zero_and_one_period() {
        assert_eq!(eval_phi(0.0, 1e-12).unwrap().value, ComplexPoint::new(0.0, 0.0));
        let tagged = eval_phi(TimePoint::rational(1, 1).unwrap(), 1e-10).unwrap();
        assert!((tagged.value - ComplexPoint::new(0.0, 1.0 / TAU)).norm() < 1e-17);
        // Untagged: the rounding of 1/(2π) moves φ by about 0.23·√(2π·ulp).
        let plain = eval_phi(1.0 / TAU, 1e-8).unwrap();
        assert!((plain.value - ComplexPoint::new(0.0, 0.1591549)).norm() < 1e-7);
    }

    #[test]
    fn phi_matches_phi_d_identity() {
        let t = 0.05;
        let tol = 1e-8;
        let lhs = eval_phi(t, tol).unwrap().value;
        let d = eval_phi_d(-4.0 * PI * t, tol).unwrap().value;
        let rhs = ComplexPoint::new(0.0, -1.0) * d / TAU + ComplexPoint::new(1.0 / 12.0, t);
        assert!((lhs - rhs).norm() <= 3.0 * tol, "{lhs} vs {rhs}");
    }

    #[test]
    fn phi_agrees_with_naive_summation() {
        for t in [0.013, 0.1, -0.2718, 0.9] {
            let v = eval_phi(t, 1e-6).unwrap();
            let oracle = naive_phi(t, v.truncation_n);
            assert!((v.value - oracle).norm() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn truncation_certificate_holds_when_doubling_terms() {
        let ev = Evaluator::default();
        for t in [0.031, 0.4, 0.777] {
            let a = ev.phi(TimePoint::new(t), 1e-6).unwrap();
            let b = ev.phi(TimePoint::new(t), 0.5e-6).unwrap();
            assert!(b.truncation_n >= 2 * a.truncation_n - 1);
            assert!((a.value - b.value).norm() <= a.tail_bound);
        }
    }

    #[test]
    fn tail_bound_is_the_stated_law() {
        let r = eval_phi(0.123, 1e-5).unwrap();
        assert!(r.tail_bound <= 1e-5);
        assert_eq!(r.tail_bound, 1.0 / (PI * PI * r.truncation_n as f64));
        assert_eq!(r.truncation_n, (1.0 / (PI * PI * 1e-5)).ceil() as u64);
    }

    #[test]
    fn infeasible_tolerance_is_reported() {
        let ev = Evaluator::new(SeriesConfig {
            max_terms: 1_000_000_000,
            ..SeriesConfig::default()
        });
        assert!(matches!(
            ev.phi(TimePoint::new(0.3), 1e-12),
            Err(Error::InfeasibleTolerance { .. })
        ));
        assert!(matches!(ev.r(0.3, 1e-12), Err(Error::InfeasibleTolerance { .. })));
        assert!(ev.phi(TimePoint::new(0.3), 0.0).is_err());
        assert!(ev.phi(TimePoint::new(0.3), f64::NAN).is_err());
    }

    #[test]
    fn phi_delta_examples() {
        let z = phi_delta(0.3, 0.0, 1e-3).unwrap();
        assert_eq!(z.value, ComplexPoint::new(0.0, 0.0));
        assert!(matches!(phi_delta(0.3, 1e-12, 1e-3), Err(Error::ResolutionFloor { .. })));

        let d = phi_delta(0.1, 1e-3, 1e-4).unwrap();
        let a = eval_phi(0.1 + 1e-3, 1e-8).unwrap();
        let b = eval_phi(0.1, 1e-8).unwrap();
        let bound = d.tail_bound + a.tail_bound + b.tail_bound;
        assert!((d.value - (a.value - b.value)).norm() <= bound);
    }

    #[test]
    fn phi_delta_at_tagged_rational_matches_subtraction() {
        let t0 = TimePoint::rational(1, 3).unwrap();
        let h = 1e-4;
        let d = phi_delta(t0, h, 1e-3).unwrap();
        // Same truncation, summed as two separate series and subtracted.
        let n = d.truncation_n;
        let a0 = t0.phase();
        let a1 = a0.shifted(dd::TAU.mul_f64(h).neg());
        let s0 = quad_sum(&[a0], &[1.0], n).oscillatory;
        let s1 = quad_sum(&[a1], &[1.0], n).oscillatory;
        let sub = (s0 - s1) / (2.0 * PI * PI) + ComplexPoint::new(0.0, h);
        assert!((d.value - sub).norm() < 1e-13);
    }
}
