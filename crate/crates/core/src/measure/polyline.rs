use alloc::vec::Vec;

use crate::error::invalid;
use crate::series::{Evaluator, TimePoint};
use crate::{ComplexPoint, Result};

/// Samples `(x, φ(x/(2π)))` of a curve, ordered by parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    samples: Vec<(f64, ComplexPoint)>,
    certified_tol: f64,
}

impl Polyline {
    /// Fails unless the parameters strictly increase and all values are finite.
    pub fn new(samples: Vec<(f64, ComplexPoint)>, certified_tol: f64) -> Result<Self> {
        if !(certified_tol >= 0.0) {
            return Err(invalid("certified_tol", "must be non-negative"));
        }
        if samples
            .iter()
            .any(|(x, z)| !x.is_finite() || !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(invalid("samples", "must be finite"));
        }
        if samples.windows(2).any(|w| !(w[0].0 < w[1].0)) {
            return Err(invalid("samples", "parameters must strictly increase"));
        }
        Ok(Self {
            samples,
            certified_tol,
        })
    }

    pub fn samples(&self) -> &[(f64, ComplexPoint)] {
        &self.samples
    }

    pub fn points(&self) -> impl Iterator<Item = ComplexPoint> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    pub fn certified_tol(&self) -> f64 {
        self.certified_tol
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Largest distance between consecutive points.
    pub fn max_gap(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).norm())
            .fold(0.0, f64::max)
    }

    /// Smallest distance between consecutive points.
    pub fn min_gap(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Merges two polylines, keeping the first sample at any repeated parameter.
    pub fn merge(&self, other: &Polyline) -> Polyline {
        let mut all: Vec<_> = self.samples.iter().chain(&other.samples).copied().collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        all.dedup_by(|b, a| a.0 == b.0);
        Polyline {
            samples: all,
            certified_tol: self.certified_tol.max(other.certified_tol),
        }
    }
}

/// `n` equally spaced samples of `x ↦ φ(x/(2π))` on `[x_lo, x_hi]`.
pub fn trace_image(x_lo: f64, x_hi: f64, n: usize, tol: f64) -> Result<Polyline> {
    trace_image_with(&Evaluator::default(), x_lo, x_hi, n, tol)
}

pub fn trace_image_with(ev: &Evaluator, x_lo: f64, x_hi: f64, n: usize, tol: f64) -> Result<Polyline> {
    if !(0.0 <= x_lo && x_lo < x_hi && x_hi <= 1.0) {
        return Err(invalid("x_lo, x_hi", "need 0 <= x_lo < x_hi <= 1"));
    }
    if n < 2 {
        return Err(invalid("n", "must be at least 2"));
    }
    let step = (x_hi - x_lo) / (n - 1) as f64;
    let samples = (0..n)
        .map(|j| {
            let x = if j == n - 1 { x_hi } else { x_lo + step * j as f64 };
            Ok((x, ev.phi(time_of(x)?, tol)?.value))
        })
        .collect::<Result<Vec<_>>>()?;
    Polyline::new(samples, tol)
}

/// Integer parameters are tagged so that `x = 0` and `x = 1` are exact.
fn time_of(x: f64) -> Result<TimePoint> {
    if x == libm::floor(x) {
        TimePoint::rational(x as i64, 1)
    } else {
        Ok(TimePoint::from_x(x))
    }
}

/// Euclidean diameter of a finite point set (`0` for fewer than two points).
pub fn diameter(points: &[ComplexPoint]) -> f64 {
    let hull = convex_hull(points);
    let n = hull.len();
    if n < 3 {
        return if n == 2 { (hull[0] - hull[1]).norm() } else { 0.0 };
    }
    // Rotating calipers over the counter-clockwise hull.
    let area = |a: ComplexPoint, b: ComplexPoint, c: ComplexPoint| {
        ((b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)).abs()
    };
    // Axis extremes: exact for nearly collinear hulls, where the areas are rounding noise.
    let by = |f: fn(&ComplexPoint) -> f64| {
        let lo = hull.iter().copied().min_by(|a, b| f(a).total_cmp(&f(b))).unwrap();
        let hi = hull.iter().copied().max_by(|a, b| f(a).total_cmp(&f(b))).unwrap();
        (hi - lo).norm_sqr()
    };
    let mut d2 = by(|z| z.re).max(by(|z| z.im));
    let mut j = 1;
    for i in 0..n {
        let ni = (i + 1) % n;
        while area(hull[i], hull[ni], hull[(j + 1) % n]) > area(hull[i], hull[ni], hull[j]) {
            j = (j + 1) % n;
        }
        d2 = d2.max((hull[i] - hull[j]).norm_sqr()).max((hull[ni] - hull[j]).norm_sqr());
    }
    libm::sqrt(d2)
}

/// Vertices of the convex hull (monotone chain, collinear points dropped).
fn convex_hull(points: &[ComplexPoint]) -> Vec<ComplexPoint> {
    let mut p: Vec<_> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let cross = |o: ComplexPoint, a: ComplexPoint, b: ComplexPoint| {
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut hull: Vec<ComplexPoint> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &ComplexPoint> = if pass == 0 {
            &mut p.iter()
        } else {
            &mut p.iter().rev()
        };
        for &z in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], z) <= 0.0 {
                hull.pop();
            }
            hull.push(z);
        }
        hull.pop();
    }
    hull
}

/// 1-Hausdorff content bound of a union of connected pieces: the sum of
/// their diameters.
pub fn h1_content(pieces: &[&[ComplexPoint]]) -> f64 {
    pieces.iter().map(|p| diameter(p)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{PI, TAU};

    #[test]
    fn trace_endpoints_and_period() {
        let tol = 1e-6;
        let poly = trace_image(0.0, 1.0, 11, tol).unwrap();
        let s = poly.samples();
        assert_eq!(s[0].1, ComplexPoint::new(0.0, 0.0));
        let d = s[10].1 - s[0].1;
        assert!((d - ComplexPoint::new(0.0, 1.0 / TAU)).norm() <= 2.0 * tol);
        let mid = crate::eval_phi(TimePoint::from_x(0.3), tol).unwrap().value;
        assert!((s[3].1 - mid).norm() <= 2.0 * tol);
    }

    #[test]
    fn trace_validation() {
        assert!(trace_image(0.5, 0.5, 10, 1e-3).is_err());
        assert!(trace_image(0.0, 1.5, 10, 1e-3).is_err());
        assert!(trace_image(0.0, 1.0, 1, 1e-3).is_err());
        assert!(Polyline::new(alloc::vec![(0.1, ComplexPoint::new(0.0, 0.0)); 2], 0.0).is_err());
    }

    #[test]
    fn diameters_of_simple_sets() {
        let seg: Vec<_> = (0..=100).map(|k| ComplexPoint::new(0.03 * k as f64, 0.0)).collect();
        assert!((diameter(&seg) - 3.0).abs() < 1e-12);
        let arc: Vec<_> = (0..=1000)
            .map(|k| ComplexPoint::from_polar(2.0, PI * k as f64 / 1000.0))
            .collect();
        assert!((diameter(&arc) - 4.0).abs() < 1e-12);
        let other: Vec<_> = (0..=10).map(|k| ComplexPoint::new(5.0, 0.1 * k as f64)).collect();
        assert!((h1_content(&[&seg, &other]) - 4.0).abs() < 1e-12);
        assert_eq!(diameter(&seg[..1]), 0.0);
    }
}
