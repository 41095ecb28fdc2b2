use crate::error::invalid;
use crate::{Error, Result};

/// Whether the majorant series of the cover converges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumVerdict {
    Convergent,
    Divergent,
}

/// Partial sum `C^α Σ_{q=Q0}^{Qmax} q^{1-3α/2}` with its tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentSum {
    pub alpha: f64,
    pub q0: u64,
    pub qmax: u64,
    pub partial: f64,
    /// `+∞` when the series diverges.
    pub tail_bound: f64,
    pub verdict: SumVerdict,
}

/// Compensated sum of `f(q)` over `q0..=qmax`.
fn sum_over(q0: u64, qmax: u64, f: impl Fn(u64) -> f64) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for q in q0..=qmax {
        let v = f(q);
        let t = s + v;
        c += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
        s = t;
    }
    s + c
}

fn check(alpha: f64, q0: u64, qmax: u64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid("alpha", "must be positive"));
    }
    if q0 < 1 || q0 > qmax {
        return Err(invalid("q0", "need 1 <= q0 <= qmax"));
    }
    Ok(())
}

/// Majorant of `H^α_δ` over the cover by balls of radius `C q^{-3/2}`,
/// `q0 ≤ q ≤ qmax`, with each `q` counted `q` times.
pub fn content_partial_sum(alpha: f64, q0: u64, qmax: u64, c_used: f64) -> Result<ContentSum> {
    check(alpha, q0, qmax)?;
    let e = 1.5 * alpha;
    let scale = libm::pow(c_used, alpha);
    let partial = scale * sum_over(q0, qmax, |q| libm::pow(q as f64, 1.0 - e));
    let tail_bound = if e > 2.0 {
        scale * libm::pow(qmax as f64, 2.0 - e) / (e - 2.0)
    } else {
        f64::INFINITY
    };
    Ok(ContentSum {
        alpha,
        q0,
        qmax,
        partial,
        tail_bound,
        verdict: if alpha > 4.0 / 3.0 {
            SumVerdict::Convergent
        } else {
            SumVerdict::Divergent
        },
    })
}

/// `(2C)^α Σ totient(q)·q^{-3α/2}`: the exact `Σ diam^α` of the cover.
pub fn content_totient_sum(alpha: f64, q0: u64, qmax: u64, c_used: f64) -> Result<f64> {
    check(alpha, q0, qmax)?;
    let phi = crate::diophantine::totients(qmax as usize);
    let e = 1.5 * alpha;
    Ok(libm::pow(2.0 * c_used, alpha) * sum_over(q0, qmax, |q| phi[q as usize] as f64 * libm::pow(q as f64, -e)))
}

/// Upper bound `(4α-2)/α` on the dimension of the image of points of
/// Hölder exponent `α ∈ [1/2, 3/4]`.
pub fn spectrum_bound(alpha: f64) -> Result<f64> {
    if !(0.5..=0.75).contains(&alpha) {
        return Err(Error::InadmissibleExponent(alpha));
    }
    Ok((4.0 * alpha - 2.0) / alpha)
}

/// Dimension of the set of times with Hölder exponent `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumValue {
    Dim(f64),
    /// The set is empty (dimension `-∞`).
    Empty,
}

pub fn jaffard_dim(alpha: f64) -> SpectrumValue {
    if (0.5..=0.75).contains(&alpha) {
        SpectrumValue::Dim(4.0 * alpha - 2.0)
    } else if alpha == 1.5 {
        SpectrumValue::Dim(0.0)
    } else {
        SpectrumValue::Empty
    }
}

/// Parameters of the cover adapted to points of exponent `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedCover {
    /// Approximation exponent with `α = 1/2 + 1/(2γ)`.
    pub gamma: f64,
    /// Radii are `C q^{-radius_exponent}`.
    pub radius_exponent: f64,
    /// Exponent `s` above which `Σ q · q^{-s·radius_exponent}` converges.
    pub convergence_threshold: f64,
}

pub fn refined_cover_exponent(alpha: f64) -> Result<RefinedCover> {
    if !(alpha > 0.5 && alpha <= 0.75) {
        return Err(Error::InadmissibleExponent(alpha));
    }
    let gamma = 1.0 / (2.0 * alpha - 1.0);
    Ok(RefinedCover {
        gamma,
        radius_exponent: (gamma + 1.0) / 2.0,
        convergence_threshold: (4.0 * alpha - 2.0) / alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_growth_at_threshold() {
        let a = content_partial_sum(4.0 / 3.0, 1, 1000, 0.5).unwrap();
        let b = content_partial_sum(4.0 / 3.0, 1, 1_000_000, 0.5).unwrap();
        let scale = libm::pow(0.5, 4.0 / 3.0);
        // H(10^6) - H(10^3) = ln 1000 - 0.0004995... to O(1e-7).
        let expect = scale * (libm::log(1000.0) - (0.5 / 1000.0 - 0.5e-6));
        assert!((b.partial - a.partial - expect).abs() < 1e-6);
        assert_eq!(a.verdict, SumVerdict::Divergent);
        assert!(a.tail_bound.is_infinite());
    }

    #[test]
    fn tail_bound_at_three_halves() {
        let c: f64 = 0.7;
        let s = content_partial_sum(1.5, 10, 10_000, c).unwrap();
        let expect = libm::pow(c, 1.5) * 4.0 * libm::pow(1e4, -0.25);
        assert!((s.tail_bound - expect).abs() < 1e-12);
        assert_eq!(s.verdict, SumVerdict::Convergent);
        let far = content_partial_sum(1.5, 10, 10_000_000, c).unwrap();
        assert!(far.partial > s.partial && far.partial <= s.partial + s.tail_bound);
    }

    #[test]
    fn power_growth_below_threshold() {
        let s = content_partial_sum(1.2, 1, 1_000_000, 1.0).unwrap();
        // Σ q^{-0.8} = 5 Q^{0.2} + ζ(0.8) + O(Q^{-0.8}), ζ(0.8) = -4.4375...
        let expect = 5.0 * libm::pow(1e6, 0.2) - 4.437_538_415_895_55;
        assert!((s.partial - expect).abs() < 1e-4, "{}", s.partial);
        assert_eq!(s.verdict, SumVerdict::Divergent);
    }

    #[test]
    fn spectrum_values() {
        assert_eq!(spectrum_bound(0.75).unwrap(), 4.0 / 3.0);
        assert_eq!(spectrum_bound(0.5).unwrap(), 0.0);
        assert!((spectrum_bound(0.6).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(spectrum_bound(0.8).is_err());
        assert!(matches!(jaffard_dim(0.6), SpectrumValue::Dim(d) if (d - 0.4).abs() < 1e-15));
        assert_eq!(jaffard_dim(1.5), SpectrumValue::Dim(0.0));
        assert_eq!(jaffard_dim(1.0), SpectrumValue::Empty);
        assert_eq!(jaffard_dim(0.4), SpectrumValue::Empty);
    }

    #[test]
    fn refined_exponents() {
        let r = refined_cover_exponent(0.75).unwrap();
        assert_eq!((r.gamma, r.radius_exponent, r.convergence_threshold), (2.0, 1.5, 4.0 / 3.0));
        let r = refined_cover_exponent(0.6).unwrap();
        assert!((r.gamma - 5.0).abs() < 1e-12 && (r.radius_exponent - 3.0).abs() < 1e-12);
        assert!((r.convergence_threshold - 2.0 / 3.0).abs() < 1e-15);
        assert!(refined_cover_exponent(0.5).is_err());
        assert!(refined_cover_exponent(0.76).is_err());
    }
}
