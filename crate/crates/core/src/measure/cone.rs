use alloc::vec::Vec;
use core::f64::consts::PI;

use super::polyline::{h1_content, Polyline};
use crate::error::invalid;
use crate::series::TimePoint;
use crate::{eval_phi, unit, ComplexPoint, Error, Result};

/// Ratio below which a cone direction is not rejected as a tangent.
pub const CONE_FLOOR: f64 = 0.05;

/// Closed double cone `{v + s·w : |angle(w, ±direction)| ≤ opening/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub vertex: ComplexPoint,
    pub direction: ComplexPoint,
    /// Full opening angle in `(0, π)`.
    pub opening: f64,
}

impl Cone {
    pub fn new(vertex: ComplexPoint, direction: ComplexPoint, opening: f64) -> Result<Self> {
        let direction = unit(direction).ok_or_else(|| invalid("direction", "must be non-zero"))?;
        if !(opening > 0.0 && opening < PI) {
            return Err(invalid("opening", "must lie in (0, π)"));
        }
        Ok(Self {
            vertex,
            direction,
            opening,
        })
    }

    pub fn contains(&self, p: ComplexPoint) -> bool {
        let w = (p - self.vertex) * self.direction.conj();
        if w.re == 0.0 && w.im == 0.0 {
            return true;
        }
        libm::atan2(w.im.abs(), w.re.abs()) <= 0.5 * self.opening
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConeScan {
    /// `(h, H¹ content outside the cone within B(center, h) / h)`.
    pub ratios: Vec<(f64, f64)>,
    /// Every ratio stays at or above [`CONE_FLOOR`].
    pub rejected: bool,
}

impl ConeScan {
    pub fn terminal(&self) -> f64 {
        self.ratios.last().map_or(0.0, |r| r.1)
    }
}

/// Cone test at `φ(t_{x0})` with the center evaluated to the polyline's
/// certified accuracy.
pub fn cone_tangent_ratio(
    x0: f64,
    cone_dir: ComplexPoint,
    opening: f64,
    h_list: &[f64],
    poly: &Polyline,
) -> Result<ConeScan> {
    let tol = poly.certified_tol().max(1e-12);
    let center = eval_phi(TimePoint::from_x(x0), tol)?.value;
    cone_ratio_at(center, cone_dir, opening, h_list, poly)
}

/// Cone test around an explicit center.
pub fn cone_ratio_at(
    center: ComplexPoint,
    cone_dir: ComplexPoint,
    opening: f64,
    h_list: &[f64],
    poly: &Polyline,
) -> Result<ConeScan> {
    let cone = Cone::new(center, cone_dir, opening)?;
    if h_list.is_empty() || h_list.iter().any(|h| !(*h > 0.0)) || h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("h_list", "must be positive and strictly decreasing"));
    }
    check_density(center, h_list, poly)?;
    let pts: Vec<ComplexPoint> = poly.points().collect();
    let ratios: Vec<(f64, f64)> = h_list
        .iter()
        .map(|&h| {
            let keep = |z: &ComplexPoint| (z - center).norm() <= h && !cone.contains(*z);
            let mut pieces: Vec<&[ComplexPoint]> = Vec::new();
            let mut start = None;
            for (i, z) in pts.iter().enumerate() {
                match (keep(z), start) {
                    (true, None) => start = Some(i),
                    (false, Some(s)) => {
                        pieces.push(&pts[s..i]);
                        start = None;
                    }
                    _ => {}
                }
            }
            if let Some(s) = start {
                pieces.push(&pts[s..]);
            }
            (h, h1_content(&pieces) / h)
        })
        .collect();
    let rejected = ratios.iter().all(|r| r.1 >= CONE_FLOOR);
    Ok(ConeScan { ratios, rejected })
}

/// Consecutive gaps near the center must be below `min(h)/20`, and the
/// curve must pass that close to the center.
fn check_density(center: ComplexPoint, h_list: &[f64], poly: &Polyline) -> Result<()> {
    let reach = h_list[0];
    let limit = h_list[h_list.len() - 1] / 20.0;
    let s = poly.samples();
    let mut gap = 0.0f64;
    let mut nearest = f64::INFINITY;
    for (k, (_, z)) in s.iter().enumerate() {
        let d = (z - center).norm();
        nearest = nearest.min(d);
        if k + 1 < s.len() && (d <= reach || (s[k + 1].1 - center).norm() <= reach) {
            gap = gap.max((s[k + 1].1 - z).norm());
        }
    }
    let gap = gap.max(nearest);
    if gap >= limit {
        return Err(Error::RefineTrace { gap, limit });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(dir: ComplexPoint, n: usize) -> Polyline {
        let samples = (0..n)
            .map(|k| {
                let s = -1.0 + 2.0 * (k as f64 + 0.5) / n as f64;
                (s, dir * s)
            })
            .collect();
        Polyline::new(samples, 0.0).unwrap()
    }

    #[test]
    fn membership_is_closed_and_symmetric() {
        let c = Cone::new(ComplexPoint::new(1.0, 1.0), ComplexPoint::new(0.0, 1.0), PI / 2.0).unwrap();
        let edge = ComplexPoint::new(1.0, 1.0);
        assert!(c.contains(c.vertex + edge * 1e-3));
        assert!(c.contains(c.vertex - edge * 3.0));
        assert!(c.contains(c.vertex));
        assert!(!c.contains(c.vertex + ComplexPoint::new(1.0, 0.1)));
        assert!(Cone::new(c.vertex, c.direction, PI).is_err());
    }

    #[test]
    fn aligned_and_orthogonal_cones_on_a_line() {
        let d = ComplexPoint::from_polar(1.0, 0.4);
        let poly = line(d, 200_000);
        let hs = [0.5, 0.2, 0.1, 0.05];
        let open = 20f64.to_radians();
        let z = ComplexPoint::new(0.0, 0.0);
        let aligned = cone_ratio_at(z, d, open, &hs, &poly).unwrap();
        assert!(aligned.ratios.iter().all(|r| r.1 == 0.0));
        assert!(!aligned.rejected);
        let ortho = cone_ratio_at(z, d * ComplexPoint::new(0.0, 1.0), open, &hs, &poly).unwrap();
        for (_, r) in &ortho.ratios {
            assert!((r - 2.0).abs() < 1e-3, "{r}");
        }
        assert!(ortho.rejected);
    }

    #[test]
    fn sparse_trace_is_refused() {
        let poly = line(ComplexPoint::new(1.0, 0.0), 100);
        let r = cone_ratio_at(ComplexPoint::new(0.0, 0.0), ComplexPoint::new(0.0, 1.0), 0.3, &[0.5, 0.1], &poly);
        assert!(matches!(r, Err(Error::RefineTrace { .. })));
    }
}
