use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use super::chord::{ChordSource, PhiChords};
use super::profile::{nearest_eighth_root, DirectionProfile, DirectionSample};
use super::schedule::HSchedule;
use super::{time_point, GeometryConfig};
use crate::diophantine::Rational;
use crate::{angular_distance, ComplexPoint, Error, Result};

/// One-sided chord limits at a rational with `q ≢ 2 (mod 4)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerReport {
    pub right: DirectionProfile,
    pub left: DirectionProfile,
    /// Ratio of the two limit directions (of the deepest samples when a
    /// limit is not reported).
    pub ratio_right_over_left: ComplexPoint,
    /// Angular distance from the ratio to `i`.
    pub ratio_distance_to_i: f64,
    /// `(|h|, distance to i)` of the right/left ratio at each schedule offset.
    pub ratio_trace: Vec<(f64, f64)>,
    /// Distance from the right direction to the grid `e^{iπm/4}`.
    pub nearest_eighth_root_distance: f64,
    /// Right direction rotated by `e^{-iπ/4}`.
    pub e_pq_estimate: ComplexPoint,
}

impl CornerReport {
    pub fn limits_exist(&self) -> bool {
        self.right.limit_estimate.is_some() && self.left.limit_estimate.is_some()
    }
}

/// Collects directions at `sign · h` for every schedule magnitude.
pub(crate) fn profile<S: ChordSource>(
    src: &S,
    magnitudes: &[f64],
    sign: f64,
    cfg: &GeometryConfig,
) -> Result<DirectionProfile> {
    let samples = magnitudes
        .iter()
        .map(|&h| {
            let c = src.chord(sign * h)?;
            Ok(DirectionSample {
                h: sign * h,
                dir: c.direction(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DirectionProfile::new(
        samples,
        cfg.tail_fraction,
        cfg.limit_dispersion,
    ))
}

/// Right and left chord limits at `t_{p/q}` along `sched` (both sides are
/// always evaluated).
pub fn corner_check(pq: &Rational, sched: &HSchedule, cfg: &GeometryConfig) -> Result<CornerReport> {
    if pq.mod4() == 2 {
        return Err(Error::WrongResidueClass {
            mod4: 2,
            use_instead: "spiral_profile",
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
    let m = sched.magnitudes();
    let right = profile(&src, &m, 1.0, cfg)?;
    let left = profile(&src, &m, -1.0, cfg)?;

    let i = ComplexPoint::new(0.0, 1.0);
    let ratio_trace = right
        .samples
        .iter()
        .zip(&left.samples)
        .map(|(r, l)| (r.h, angular_distance(r.dir / l.dir, i)))
        .collect();
    let r = right.limit_estimate.or(right.deepest()).unwrap_or(i);
    let l = left.limit_estimate.or(left.deepest()).unwrap_or(i);
    let ratio = r / l;
    Ok(CornerReport {
        ratio_right_over_left: ratio,
        ratio_distance_to_i: angular_distance(ratio, i),
        ratio_trace,
        nearest_eighth_root_distance: nearest_eighth_root(r).0,
        e_pq_estimate: r * ComplexPoint::from_polar(1.0, -FRAC_PI_4),
        right,
        left,
    })
}
