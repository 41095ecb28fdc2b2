use alloc::vec::Vec;

use super::chord::{Chord, ChordSource, PhiChords};
use super::profile::{accumulated_turning, max_circular_gap};
use super::schedule::HSchedule;
use super::{time_point, GeometryConfig};
use crate::diophantine::Rational;
use crate::{ComplexPoint, Error, Result};

/// Chord behaviour at a rational with `q ≡ 2 (mod 4)`.
///
/// Samples are taken from the largest offset downwards; on each side the
/// walk stops at the first chord that cannot be resolved within the budget.
/// Adding samples never decreases `winding_total` and never increases
/// `direction_gaps`, so both are conservative for the full schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralReport {
    pub samples: Vec<Chord>,
    /// `Σ |Δ arg|` along consecutive resolved samples of each side.
    pub winding_total: f64,
    /// Largest gap of the visited directions on the circle.
    pub direction_gaps: f64,
    /// `direction_gaps` is below the configured threshold.
    pub dense: bool,
    /// Smallest resolved `|h|` on each evaluated side.
    pub resolved_min_h: Vec<f64>,
    /// Schedule points left unevaluated.
    pub unresolved: usize,
    /// `|Δφ(h)|/|h|` strictly decreases along the last half of each side,
    /// sampled at offsets at least a factor 2 apart.
    pub speed_monotone: bool,
}

impl SpiralReport {
    pub fn directions(&self) -> Vec<ComplexPoint> {
        self.samples.iter().map(Chord::direction).collect()
    }
}

/// Spiral statistics at `t_{p/q}` for `q ≡ 2 (mod 4)`.
pub fn spiral_profile(pq: &Rational, sched: &HSchedule, cfg: &GeometryConfig) -> Result<SpiralReport> {
    if pq.mod4() != 2 {
        return Err(Error::WrongResidueClass {
            mod4: pq.mod4(),
            use_instead: "corner_check",
        });
    }
    let x0 = time_point(pq)?;
    let q = x0.exact().map(|(_, q)| q as f64).unwrap_or(1.0);
    sched.check_max(1.0 / (q * q))?;
    sched.check_floor(cfg.floor_x())?;
    let src = PhiChords {
        x0,
        evaluator: cfg.evaluator,
        rel_tol: cfg.rel_tol,
        resolve_factor: cfg.resolve_factor,
        budget: cfg.budget,
    };
    Ok(spiral_from(&src, sched, cfg))
}

pub(crate) fn spiral_from<S: ChordSource>(src: &S, sched: &HSchedule, cfg: &GeometryConfig) -> SpiralReport {
    let mags = sched.magnitudes();
    let mut samples = Vec::new();
    let mut winding_total = 0.0;
    let mut resolved_min_h = Vec::new();
    let mut unresolved = 0;
    let mut speed_monotone = true;
    // Speeds are compared between offsets at least a factor 2 apart.
    let stride = (libm::log(0.5) / libm::log(sched.ratio)).ceil().max(1.0) as usize;
    for &sign in sched.side.signs() {
        let mut side = Vec::new();
        for (k, &h) in mags.iter().enumerate() {
            match src.chord(sign * h) {
                Ok(c) => side.push(c),
                Err(_) => {
                    unresolved += mags.len() - k;
                    break;
                }
            }
        }
        let dirs: Vec<_> = side.iter().map(Chord::direction).collect();
        winding_total += accumulated_turning(&dirs);
        if let Some(c) = side.last() {
            resolved_min_h.push(c.h.abs());
        }
        let tail: Vec<f64> = side[side.len() / 2..]
            .iter()
            .rev()
            .step_by(stride)
            .map(|c| c.delta.norm() / c.h.abs())
            .collect();
        speed_monotone &= tail.len() >= 2 && tail.windows(2).all(|w| w[0] < w[1]);
        samples.extend(side);
    }
    let dirs: Vec<_> = samples.iter().map(Chord::direction).collect();
    let direction_gaps = max_circular_gap(&dirs);
    SpiralReport {
        samples,
        winding_total,
        direction_gaps,
        dense: direction_gaps < cfg.spiral_gap,
        resolved_min_h,
        unresolved,
        speed_monotone,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::make_rational;
    use crate::geometry::Side;
    use core::f64::consts::TAU;

    #[test]
    fn winding_grows_with_depth() {
        let cfg = GeometryConfig::default();
        let half = make_rational(1, 2).unwrap();
        let short = HSchedule::spanning(1e-2, 1e-3, 0.97, Side::Right).unwrap();
        let long = HSchedule::spanning(1e-2, 1e-4, 0.97, Side::Right).unwrap();
        let a = spiral_profile(&half, &short, &cfg).unwrap();
        let b = spiral_profile(&half, &long, &cfg).unwrap();
        assert_eq!(a.unresolved + b.unresolved, 0);
        assert!(b.winding_total >= a.winding_total + TAU, "{} {}", a.winding_total, b.winding_total);
        assert!(b.speed_monotone);
    }

    #[test]
    fn wrong_class_is_rejected() {
        let s = HSchedule::spanning(1e-3, 1e-5, 0.5, Side::Both).unwrap();
        let third = make_rational(1, 3).unwrap();
        assert!(matches!(
            spiral_profile(&third, &s, &GeometryConfig::default()),
            Err(Error::WrongResidueClass { mod4: 3, .. })
        ));
    }

    #[test]
    fn unresolvable_tail_stops_the_walk() {
        let cfg = GeometryConfig {
            budget: 0,
            rel_tol: 1e-4,
            ..GeometryConfig::default()
        };
        let half = make_rational(1, 2).unwrap();
        let s = HSchedule::spanning(1e-2, 1e-6, 0.5, Side::Right).unwrap();
        let r = spiral_profile(&half, &s, &cfg).unwrap();
        assert!(r.unresolved > 0);
        assert!(r.resolved_min_h[0] > 1e-6);
        assert!(r.winding_total >= 0.0 && r.direction_gaps <= TAU && r.direction_gaps > 0.0);
    }
}
