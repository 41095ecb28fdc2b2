use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::polyline::{diameter, Polyline};
use crate::{ComplexPoint, Error, Result};

/// Grid offsets tried besides the origin-anchored grid.
const OFFSETS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCount {
    /// Scales that passed the range filter.
    pub scales: Vec<f64>,
    /// Occupied boxes of the origin-anchored grid at each scale.
    pub counts: Vec<u64>,
    /// Least-squares slope of `ln count` against `ln(1/scale)`.
    pub slope: f64,
    pub fit_r2: f64,
    /// Slopes with the grid shifted by random fractions of the largest scale.
    pub offset_slopes: Vec<f64>,
    /// Range of all slopes, origin grid included.
    pub offset_spread: f64,
}

/// [`box_count_seeded`] with seed `0`.
pub fn box_count(poly: &Polyline, scales: &[f64]) -> Result<BoxCount> {
    box_count_seeded(poly, scales, 0)
}

/// Box-counting slope of the sample points over the scales lying in
/// `[10·min gap, diameter/4]`.
pub fn box_count_seeded(poly: &Polyline, scales: &[f64], seed: u64) -> Result<BoxCount> {
    let pts: Vec<ComplexPoint> = poly.points().collect();
    let lo = 10.0 * poly.min_gap();
    let hi = diameter(&pts) / 4.0;
    let used: Vec<f64> = scales.iter().copied().filter(|&s| s >= lo && s <= hi).collect();
    if used.len() < 3 {
        return Err(Error::InsufficientScaleRange { usable: used.len() });
    }
    let counts: Vec<u64> = used.iter().map(|&s| occupied(&pts, s, ComplexPoint::new(0.0, 0.0))).collect();
    let (slope, fit_r2) = fit(&used, &counts);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = used[0].max(used[used.len() - 1]);
    let offset_slopes: Vec<f64> = (0..OFFSETS)
        .map(|_| {
            let o = ComplexPoint::new(rng.gen::<f64>() * top, rng.gen::<f64>() * top);
            let c: Vec<u64> = used.iter().map(|&s| occupied(&pts, s, o)).collect();
            fit(&used, &c).0
        })
        .collect();
    let all = offset_slopes.iter().chain(core::iter::once(&slope));
    let max = all.clone().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let min = all.fold(f64::INFINITY, |a, &b| a.min(b));
    Ok(BoxCount {
        scales: used,
        counts,
        slope,
        fit_r2,
        offset_slopes,
        offset_spread: max - min,
    })
}

fn occupied(pts: &[ComplexPoint], s: f64, o: ComplexPoint) -> u64 {
    let mut cells: Vec<(i64, i64)> = pts
        .iter()
        .map(|z| {
            (
                libm::floor((z.re - o.re) / s) as i64,
                libm::floor((z.im - o.im) / s) as i64,
            )
        })
        .collect();
    cells.sort_unstable();
    cells.dedup();
    cells.len() as u64
}

fn fit(scales: &[f64], counts: &[u64]) -> (f64, f64) {
    let n = scales.len() as f64;
    let xs: Vec<f64> = scales.iter().map(|s| -libm::log(*s)).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| libm::log(c as f64)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}
