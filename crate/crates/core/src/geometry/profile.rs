use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI, TAU};

use crate::{angular_distance, wrap_angle, ComplexPoint};

/// One chord direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionSample {
    /// Signed offset in `x` units.
    pub h: f64,
    pub dir: ComplexPoint,
}

/// Chord directions along a schedule, ordered by decreasing `|h|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionProfile {
    pub samples: Vec<DirectionSample>,
    /// Direction at the smallest `|h|`, reported only when the tail window
    /// is tighter than the limit threshold.
    pub limit_estimate: Option<ComplexPoint>,
    /// Largest pairwise angular distance over the tail window.
    pub dispersion: f64,
    /// Index of the first tail sample.
    pub tail_start: usize,
}

impl DirectionProfile {
    /// `tail_fraction` of the samples (at least two) form the tail window.
    pub fn new(samples: Vec<DirectionSample>, tail_fraction: f64, limit_threshold: f64) -> Self {
        let n = samples.len();
        let width = (libm::ceil(tail_fraction * n as f64) as usize).clamp(2.min(n), n);
        let tail_start = n - width;
        let tail = &samples[tail_start..];
        let mut dispersion = 0.0f64;
        for (i, a) in tail.iter().enumerate() {
            for b in &tail[i + 1..] {
                dispersion = dispersion.max(angular_distance(a.dir, b.dir));
            }
        }
        let limit_estimate = match tail.last() {
            Some(s) if tail.len() >= 2 && dispersion < limit_threshold => Some(s.dir),
            _ => None,
        };
        Self {
            samples,
            limit_estimate,
            dispersion,
            tail_start,
        }
    }

    /// Direction at the smallest `|h|`.
    pub fn deepest(&self) -> Option<ComplexPoint> {
        self.samples.last().map(|s| s.dir)
    }
}

/// Distance from `z` to the nearest of `e^{iπm/4}`, and that root.
pub fn nearest_eighth_root(z: ComplexPoint) -> (f64, ComplexPoint) {
    let a = libm::atan2(z.im, z.re);
    let m = libm::round(a / FRAC_PI_4);
    let root = ComplexPoint::from_polar(1.0, m * FRAC_PI_4);
    (angular_distance(z, root), root)
}

/// Largest gap between consecutive directions on the circle (`2π` for
/// fewer than two directions).
pub fn max_circular_gap(dirs: &[ComplexPoint]) -> f64 {
    if dirs.len() < 2 {
        return TAU;
    }
    let mut args: Vec<f64> = dirs.iter().map(|d| libm::atan2(d.im, d.re)).collect();
    args.sort_by(f64::total_cmp);
    let mut gap = TAU - (args[args.len() - 1] - args[0]);
    for w in args.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

/// `Σ |Δ arg|` along consecutive directions.
pub fn accumulated_turning(dirs: &[ComplexPoint]) -> f64 {
    dirs.windows(2).map(|w| angular_distance(w[0], w[1])).sum()
}

/// Measure of the union of closed `radius`-neighbourhoods of the lines
/// spanned by `dirs` (directions modulo `π`), minus `2·radius`.
///
/// A single line, or directions clustering on one line, give 0.
pub fn axial_spread(dirs: &[ComplexPoint], radius: f64) -> f64 {
    if dirs.len() < 2 {
        return 0.0;
    }
    // Double the angles so that lines become points on a circle of length 2π.
    let mut pts: Vec<f64> = dirs
        .iter()
        .map(|d| wrap_angle(2.0 * libm::atan2(d.im, d.re)))
        .collect();
    pts.sort_by(f64::total_cmp);
    let r = 2.0 * radius;
    if r >= PI {
        return PI - radius * 2.0;
    }
    let n = pts.len();
    let mut covered = 0.0;
    for i in 0..n {
        let next = if i + 1 < n { pts[i + 1] } else { pts[0] + TAU };
        covered += (next - pts[i]).min(2.0 * r);
    }
    // Back to line angles (halve), minus one neighbourhood.
    (covered.min(TAU) / 2.0 - 2.0 * radius).max(0.0)
}
