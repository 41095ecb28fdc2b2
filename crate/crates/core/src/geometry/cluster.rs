use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::chord::{ChordSource, PhiChords};
use super::profile::{axial_spread, DirectionProfile, DirectionSample};
use super::schedule::HSchedule;
use super::GeometryConfig;
use crate::diophantine::{convergents, CFExpansion};
use crate::series::TimePoint;
use crate::{Error, Result};

/// Outcome of a direction-cluster test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterVerdict {
    /// The visited lines spread beyond the threshold.
    NoSingleTangent,
    /// Spread below the threshold, or fewer than two samples.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub profile: DirectionProfile,
    /// Measure (radians) of the union of neighbourhoods of the visited
    /// lines, minus one neighbourhood; see [`axial_spread`].
    pub angular_spread: f64,
    pub verdict: ClusterVerdict,
    /// Offsets skipped because their chord was unresolvable.
    pub skipped: usize,
}

/// Offsets `p_n/q_n - ρ` (and their negatives) whose magnitude lies within
/// the schedule range, largest first.
pub fn convergent_offsets(rho: &CFExpansion, sched: &HSchedule) -> Result<Vec<f64>> {
    let (h_max, h_min) = (sched.h0, sched.h_min());
    let mut depth = 16usize;
    let conv = loop {
        let d = match rho.available() {
            Some(a) => depth.min(a),
            None => depth,
        };
        let c = convergents(rho, d)?;
        let deepest = c.last().map(|c| c.error.1.to_f64().unwrap_or(0.0));
        let exhausted = rho.available().is_some_and(|a| d >= a);
        if exhausted || deepest.is_some_and(|e| e < h_min) || depth > 4096 {
            break c;
        }
        depth *= 2;
    };
    let mut out = Vec::new();
    for c in conv {
        let err = c.error.1.to_f64().unwrap_or(0.0);
        if c.sign == 0 || err > h_max || err < h_min {
            continue;
        }
        // ρ - p/q has sign `c.sign`, so t_ρ + h lands on t_{p/q} for h = -sign·err.
        let h = -(c.sign as f64) * err;
        for &s in sched.side.signs() {
            out.push(s * h);
        }
    }
    Ok(out)
}

/// Directions of `φ` at `t_ρ` toward its convergents.
pub fn direction_cluster(rho: &CFExpansion, sched: &HSchedule, cfg: &GeometryConfig) -> Result<ClusterReport> {
    if rho.is_terminated() {
        return Err(Error::FiniteExpansion);
    }
    sched.check_floor(cfg.floor_x())?;
    let offsets = convergent_offsets(rho, sched)?;
    let v = rho.to_f64();
    let x0 = TimePoint::from_x(v - libm::floor(v));
    let src = PhiChords {
        x0,
        evaluator: cfg.evaluator,
        rel_tol: cfg.rel_tol,
        resolve_factor: cfg.resolve_factor,
        budget: cfg.budget,
    };
    Ok(cluster_from(&src, &offsets, cfg))
}

/// Cluster statistics of any chord source over the given offsets.
pub fn cluster_from<S: ChordSource>(src: &S, offsets: &[f64], cfg: &GeometryConfig) -> ClusterReport {
    let mut samples = Vec::new();
    let mut skipped = 0;
    for &h in offsets {
        match src.chord(h) {
            Ok(c) => samples.push(DirectionSample { h, dir: c.direction() }),
            Err(_) => skipped += 1,
        }
    }
    let dirs: Vec<_> = samples.iter().map(|s| s.dir).collect();
    let angular_spread = axial_spread(&dirs, cfg.cluster_radius);
    let verdict = if samples.len() >= 2 && angular_spread > cfg.cluster_threshold {
        ClusterVerdict::NoSingleTangent
    } else {
        ClusterVerdict::Inconclusive
    };
    ClusterReport {
        profile: DirectionProfile::new(samples, cfg.tail_fraction, cfg.limit_dispersion),
        angular_spread,
        verdict,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Chord, Side};
    use crate::ComplexPoint;

    /// The parabola `s ↦ (s, s²)` at `s = 0`.
    struct Parabola;

    impl ChordSource for Parabola {
        fn chord(&self, h: f64) -> Result<Chord> {
            Ok(Chord {
                h,
                delta: ComplexPoint::new(h, h * h),
                bound: 0.0,
                terms: 0,
            })
        }
    }

    #[test]
    fn smooth_curve_has_no_spread() {
        let cfg = GeometryConfig::default();
        let offsets = HSchedule::spanning(1e-2, 1e-8, 0.5, Side::Both).unwrap().offsets();
        let r = cluster_from(&Parabola, &offsets, &cfg);
        // Both branches hug the real axis within atan(1e-2).
        assert!(r.angular_spread < 3e-2, "{}", r.angular_spread);
        assert_eq!(r.verdict, ClusterVerdict::Inconclusive);
    }

    #[test]
    fn single_sample_is_inconclusive() {
        let r = cluster_from(&Parabola, &[1e-3], &GeometryConfig::default());
        assert_eq!(r.angular_spread, 0.0);
        assert_eq!(r.verdict, ClusterVerdict::Inconclusive);
    }

    #[test]
    fn golden_offsets_follow_convergents() {
        let sched = HSchedule::spanning(1e-2, 1e-6, 0.5, Side::Right).unwrap();
        let offs = convergent_offsets(&CFExpansion::golden(), &sched).unwrap();
        // |φ - F_{n+1}/F_n| ≈ 1/(√5 F_n²) between 1e-6 and 1e-2: q_n ∈ {8, ..., 610}.
        assert_eq!(offs.len(), 10);
        for w in offs.windows(2) {
            assert!(w[0].signum() != w[1].signum());
            assert!(w[1].abs() < w[0].abs());
        }
    }
}
