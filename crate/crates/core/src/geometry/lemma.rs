use core::f64::consts::TAU;

use num_integer::Integer;

use crate::series::{Evaluator, TimePoint};
use crate::error::invalid;
use crate::Result;

/// Settings of [`lemma_constant_estimate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaConfig {
    pub evaluator: Evaluator,
    /// Smallest `|h|` in `x` units.
    pub h_floor_x: f64,
    /// Certified absolute accuracy of each ratio `|Δφ|·√q/√|h|`.
    pub ratio_tol: f64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        let evaluator = Evaluator::default();
        Self {
            h_floor_x: TAU * evaluator.config.h_floor,
            evaluator,
            ratio_tol: 2e-3,
        }
    }
}

/// `|φ(t_{p/q} + h/(2π)) - φ(t_{p/q})|·√q/√|h|` and its certified error.
pub fn lemma_ratio(p: i64, q: u64, h: f64, cfg: &LemmaConfig) -> Result<(f64, f64)> {
    let x0 = TimePoint::rational(p, q)?;
    let qf = q as f64;
    // The error of Δφ is rel_tol·√(|h|/2π); scale it to the ratio.
    let rel_tol = cfg.ratio_tol * libm::sqrt(TAU / qf);
    let d = cfg.evaluator.phi_delta(x0, h / TAU, rel_tol)?;
    let scale = libm::sqrt(qf / libm::fabs(h));
    Ok((d.value.norm() * scale, d.tail_bound * scale))
}

/// Largest observed ratio and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaEstimate {
    pub c_hat: f64,
    pub witness: (i64, u64, f64),
    pub samples: usize,
}

/// [`lemma_constant_estimate_with`] under the default configuration.
pub fn lemma_constant_estimate(q_max: u64, h_per_q: usize) -> Result<LemmaEstimate> {
    lemma_constant_estimate_with(q_max, h_per_q, &LemmaConfig::default())
}

/// Maximum of [`lemma_ratio`] over all irreducible `p/q ∈ [0, 1)` with
/// `q ≤ q_max` and `h_per_q` log-spaced `|h| ∈ [floor, 1/q²]` of both signs.
pub fn lemma_constant_estimate_with(q_max: u64, h_per_q: usize, cfg: &LemmaConfig) -> Result<LemmaEstimate> {
    if q_max < 2 {
        return Err(invalid("q_max", "must be at least 2"));
    }
    if h_per_q < 4 {
        return Err(invalid("h_per_q", "must be at least 4"));
    }
    let mut best = LemmaEstimate {
        c_hat: 0.0,
        witness: (0, 1, 0.0),
        samples: 0,
    };
    for q in 1..=q_max {
        let top = 1.0 / (q as f64 * q as f64);
        // Nudged up so rounding never lands below the floor.
        let span = libm::log(cfg.h_floor_x * (1.0 + 1e-9) / top);
        for p in (0..q as i64).filter(|p| p.gcd(&(q as i64)) == 1) {
            for j in 0..h_per_q {
                let h = top * libm::exp(span * j as f64 / (h_per_q - 1) as f64);
                for h in [h, -h] {
                    let (r, _) = lemma_ratio(p, q, h, cfg)?;
                    best.samples += 1;
                    if r > best.c_hat {
                        best.c_hat = r;
                        best.witness = (p, q, h);
                    }
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_matches_leading_asymptotics() {
        // At 0/1 the chord is ≈ e^{±iπ/4}·√(2|h|)/(2π) for small |h|.
        let cfg = LemmaConfig::default();
        let (r, err) = lemma_ratio(0, 1, 1e-6, &cfg).unwrap();
        assert!(err <= cfg.ratio_tol * 1.0001);
        assert!((r - 2f64.sqrt() / TAU).abs() < 5e-3, "{r}");
    }

    #[test]
    fn estimate_is_positive_and_witnessed() {
        let est = lemma_constant_estimate(3, 4).unwrap();
        // q = 1, 2, 3 contribute 1 + 1 + 2 fractions, 8 offsets each.
        assert_eq!(est.samples, 32);
        let (p, q, h) = est.witness;
        let (r, _) = lemma_ratio(p, q, h, &LemmaConfig::default()).unwrap();
        assert_eq!(r, est.c_hat);
        assert!(lemma_constant_estimate(1, 4).is_err());
        assert!(lemma_constant_estimate(5, 3).is_err());
    }
}
