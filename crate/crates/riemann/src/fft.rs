//! Values of `φ` on uniform grids `x = j/M` from a single FFT.
//!
//! With `x = 2πt` the oscillatory term of `φ` is `e^{-2πi k² x}`, which at
//! `x = j/M` depends on `k² mod M` only. Folding the weights `1/k²` into `M`
//! bins turns the truncated series into one forward DFT:
//!
//! ```text
//! φ(j/(2πM)) ≈ i j/(2πM) + (W - F[j mod M]) / (2π²),   F = DFT(C),
//! C[m] = Σ_{k ≤ K, k² ≡ m (mod M)} 1/k²,   W = Σ_{k ≤ K} 1/k².
//! ```

use std::f64::consts::PI;

use riemann_core::measure::{Polyline, trace_image};
use riemann_core::series::TimePoint;
use riemann_core::{ComplexPoint, Error, Evaluator, Result};
use rayon::prelude::*;
use rustfft::FftPlanner;

/// Largest grid handled by the FFT path.
pub const MAX_GRID: usize = 1 << 26;

/// `φ` at `x = j/M` for `0 ≤ j < M`.
#[derive(Debug, Clone)]
pub struct GridPhi {
    m: usize,
    terms: u64,
    weight: f64,
    spectrum: Vec<ComplexPoint>,
    certified_tol: f64,
}

impl GridPhi {
    /// Folds and transforms the series truncated for absolute accuracy `tol`.
    pub fn new(m: usize, tol: f64) -> Result<Self> {
        Self::with(&Evaluator::default(), m, tol)
    }

    pub fn with(ev: &Evaluator, m: usize, tol: f64) -> Result<Self> {
        if !(2..=MAX_GRID).contains(&m) {
            return Err(Error::InvalidParameter {
                name: "m",
                reason: format!("grid size must lie in [2, {MAX_GRID}]"),
            });
        }
        let round = roundoff(m);
        if !(tol.is_finite() && tol > 2.0 * round) {
            return Err(Error::InfeasibleTolerance {
                tol,
                required: f64::INFINITY,
                cap: ev.config.max_terms,
            });
        }
        let need = (1.0 / (PI * PI * (tol - round))).ceil();
        if need > ev.config.max_terms as f64 {
            return Err(Error::InfeasibleTolerance {
                tol,
                required: need,
                cap: ev.config.max_terms,
            });
        }
        let terms = need as u64;
        let (bins, weight) = fold(m as u64, terms);
        let mut spectrum: Vec<ComplexPoint> = bins.into_iter().map(|c| ComplexPoint::new(c, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut spectrum);
        Ok(Self {
            m,
            terms,
            weight,
            spectrum,
            certified_tol: 1.0 / (PI * PI * terms as f64) + round,
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }

    /// Bound on `|value(j) - φ(j/(2πM))|`.
    pub fn certified_tol(&self) -> f64 {
        self.certified_tol
    }

    /// `φ` at `x = j/M`; any integer `j` is accepted. Multiples of `M` are
    /// exact.
    pub fn value(&self, j: i64) -> ComplexPoint {
        let x = j as f64 / self.m as f64;
        if j.rem_euclid(self.m as i64) == 0 {
            return ComplexPoint::new(0.0, x / (2.0 * PI));
        }
        let f = self.spectrum[j.rem_euclid(self.m as i64) as usize];
        let scale = 1.0 / (2.0 * PI * PI);
        ComplexPoint::new((self.weight - f.re) * scale, x / (2.0 * PI) - f.im * scale)
    }
}

/// Rounding allowance of the fold, the transform and the final combination.
fn roundoff(m: usize) -> f64 {
    let log2m = (m as f64).log2().ceil();
    (16.0 * log2m + 16.0) * f64::EPSILON
}

/// Compensated bins `C[k² mod M]` and the total weight, in ascending `k`.
fn fold(m: u64, terms: u64) -> (Vec<f64>, f64) {
    let mut sum = vec![0.0f64; m as usize];
    let mut comp = vec![0.0f64; m as usize];
    let (mut w, mut wc) = (0.0f64, 0.0f64);
    let mut r = 0u64;
    for k in 1..=terms {
        // (k-1)² + 2k - 1 = k²
        r = (r + (2 * k - 1) % m) % m;
        let v = 1.0 / (k as f64 * k as f64);
        let i = r as usize;
        let t = sum[i] + v;
        comp[i] += if sum[i].abs() >= v { (sum[i] - t) + v } else { (v - t) + sum[i] };
        sum[i] = t;
        let t = w + v;
        wc += if w.abs() >= v { (w - t) + v } else { (v - t) + w };
        w = t;
    }
    let bins = sum.iter().zip(&comp).map(|(s, c)| s + c).collect();
    (bins, w + wc)
}

/// The grid `x_lo + k·(x_hi - x_lo)/(n - 1)` as integers `j_lo + k` over a
/// common denominator `M`, when it is one (up to `1e-9` relative).
pub fn aligned_grid(x_lo: f64, x_hi: f64, n: usize) -> Option<(i64, usize)> {
    if n < 2 || !(x_hi > x_lo) {
        return None;
    }
    let l = (n - 1) as f64 / (x_hi - x_lo);
    let m = l.round();
    if !(m >= 2.0 && m <= MAX_GRID as f64) || (l - m).abs() > 1e-9 * m {
        return None;
    }
    let j = x_lo * m;
    let jr = j.round();
    if (j - jr).abs() > 1e-9 * m.max(1.0) {
        return None;
    }
    Some((jr as i64, m as usize))
}

/// `n` equally spaced samples of `x ↦ φ(x/(2π))` on `[x_lo, x_hi] ⊂ [0, 1]`,
/// through the FFT when the grid is aligned and `tol` allows it, otherwise
/// by direct summation in parallel.
pub fn trace(x_lo: f64, x_hi: f64, n: usize, tol: f64) -> Result<Polyline> {
    if let Some((j_lo, m)) = aligned_grid(x_lo, x_hi, n) {
        if let Ok(grid) = GridPhi::new(m, tol) {
            let samples = (0..n as i64)
                .map(|k| {
                    let j = j_lo + k;
                    (j as f64 / m as f64, grid.value(j))
                })
                .collect();
            return Polyline::new(samples, grid.certified_tol());
        }
    }
    trace_direct(x_lo, x_hi, n, tol)
}

/// [`trace_image`] split over the rayon pool; the values are identical.
pub fn trace_direct(x_lo: f64, x_hi: f64, n: usize, tol: f64) -> Result<Polyline> {
    const CHUNK: usize = 256;
    if n <= CHUNK {
        return trace_image(x_lo, x_hi, n, tol);
    }
    // Validation and the endpoint conventions come from the core tracer.
    trace_image(x_lo, x_hi, 2, tol)?;
    let ev = Evaluator::default();
    let step = (x_hi - x_lo) / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|j| if j == n - 1 { x_hi } else { x_lo + step * j as f64 })
        .collect();
    let values = xs
        .par_chunks(CHUNK)
        .map(|c| {
            let ts = c.iter().map(|&x| time_of(x)).collect::<Result<Vec<_>>>()?;
            Ok(ev.phi_many(&ts, tol)?.into_iter().map(|r| r.value).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = xs.into_iter().zip(values.into_iter().flatten()).collect();
    Polyline::new(samples, tol)
}

fn time_of(x: f64) -> Result<TimePoint> {
    if x == x.floor() {
        TimePoint::rational(x as i64, 1)
    } else {
        Ok(TimePoint::from_x(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use riemann_core::eval_phi;

    #[test]
    fn grid_values_match_direct_summation() {
        let tol = 1e-7;
        let grid = GridPhi::new(1000, tol).unwrap();
        assert!(grid.certified_tol() <= tol);
        for j in [0i64, 1, 137, 500, 999, 1000, 1234, -3] {
            let direct = eval_phi(TimePoint::rational(j, 1000).unwrap(), 1e-9).unwrap().value;
            let d = (grid.value(j) - direct).norm();
            assert!(d <= tol + 2e-9, "j = {j}: {d:e}");
        }
    }

    #[test]
    fn quasi_periodic_across_the_period() {
        let grid = GridPhi::new(512, 1e-6).unwrap();
        let d = grid.value(512) - grid.value(0);
        assert!((d - ComplexPoint::new(0.0, 1.0 / (2.0 * PI))).norm() < 1e-15);
        assert_eq!(grid.value(0), ComplexPoint::new(0.0, 0.0));
    }

    #[test]
    fn alignment_detection() {
        assert_eq!(aligned_grid(0.0, 1.0, 100_001), Some((0, 100_000)));
        assert_eq!(aligned_grid(0.25, 0.5, 257), Some((256, 1024)));
        assert_eq!(aligned_grid(0.1, 0.2, 11), Some((10, 100)));
        assert_eq!(aligned_grid(0.0, 1.0, 1), None);
        assert_eq!(aligned_grid(0.0, 0.3333, 4), None);
    }

    #[test]
    fn fast_and_direct_traces_agree() {
        let a = trace(0.0, 1.0, 2049, 1e-7).unwrap();
        let b = trace_direct(0.0, 1.0, 2049, 1e-7).unwrap();
        assert_eq!(a.len(), b.len());
        let slack = a.certified_tol() + b.certified_tol();
        for ((xa, za), (xb, zb)) in a.samples().iter().zip(b.samples()) {
            assert!((xa - xb).abs() < 1e-15);
            assert!((za - zb).norm() <= slack, "x = {xa}");
        }
    }

    #[test]
    fn infeasible_tolerance_is_refused() {
        assert!(matches!(GridPhi::new(1024, 1e-15), Err(Error::InfeasibleTolerance { .. })));
        assert!(GridPhi::new(1, 1e-6).is_err());
    }
}
