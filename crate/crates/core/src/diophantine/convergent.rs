use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cf::{CFExpansion, CfSource};
use super::rational::{ln_big, ln_ratio, Rational};
use crate::{Error, Result};

/// Quotients computed beyond the requested depth of an infinite expansion to
/// tighten the enclosure of its value.
const LOOKAHEAD: usize = 3;

/// Convergent `p_n/q_n` with its approximation exponent `γ_n`, defined by
/// `|ρ - p_n/q_n| = q_n^{-γ_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergent {
    pub frac: Rational,
    pub n: usize,
    /// Sign of `ρ - p_n/q_n` (0 when equal).
    pub sign: i8,
    /// Certified enclosure `[lo, hi]` of `|ρ - p_n/q_n|`.
    pub error: (BigRational, BigRational),
    /// Midpoint of [`Convergent::gamma_bounds`]; undefined when `q_n = 1` or
    /// the convergent equals `ρ`.
    pub gamma_n: Option<f64>,
    pub gamma_bounds: Option<(f64, f64)>,
}

/// The first `depth` convergents `n = 0, ..., depth - 1`.
///
/// A terminated expansion yields at most its own length. Otherwise the value
/// is enclosed between the deepest known convergent and its mediant with the
/// previous one, which needs `a_{n+1}` for every returned `n`.
pub fn convergents(cf: &CFExpansion, depth: usize) -> Result<Vec<Convergent>> {
    let (depth, known) = match cf.available() {
        None => (depth, depth + LOOKAHEAD),
        Some(len) if cf.is_terminated() => (depth.min(len + 1), len),
        Some(len) => {
            if depth > len {
                return Err(Error::InsufficientPrecision {
                    requested: depth,
                    available: len,
                });
            }
            (depth, len)
        }
    };

    let mut ps = Vec::with_capacity(known + 1);
    let mut qs = Vec::with_capacity(known + 1);
    ps.push(cf.a0().clone());
    qs.push(BigInt::one());
    for (k, a) in cf.prefix(known).into_iter().enumerate() {
        let (pm2, qm2) = if k == 0 {
            (BigInt::one(), BigInt::zero())
        } else {
            (ps[k - 1].clone(), qs[k - 1].clone())
        };
        ps.push(&a * &ps[k] + pm2);
        qs.push(&a * &qs[k] + qm2);
    }

    let last = ps.len() - 1;
    let tip = BigRational::new(ps[last].clone(), qs[last].clone());
    let far = if cf.is_terminated() || last == 0 {
        tip.clone()
    } else {
        BigRational::new(&ps[last] + &ps[last - 1], &qs[last] + &qs[last - 1])
    };

    let mut out = Vec::with_capacity(depth);
    for n in 0..depth {
        let c = BigRational::new_raw(ps[n].clone(), qs[n].clone());
        let d1 = &tip - &c;
        let d2 = &far - &c;
        let sign = if d1.is_zero() && d2.is_zero() {
            0
        } else if d1.is_positive() || d2.is_positive() {
            1
        } else {
            -1
        };
        let (a, b) = (d1.abs(), d2.abs());
        let error = if a <= b { (a, b) } else { (b, a) };
        let gamma_bounds = gamma_from_error(&qs[n], &error);
        out.push(Convergent {
            frac: Rational::from_reduced(ps[n].clone(), qs[n].clone()),
            n,
            sign,
            gamma_n: gamma_bounds.map(|(l, h)| 0.5 * (l + h)),
            gamma_bounds,
            error,
        });
    }
    Ok(out)
}

fn gamma_from_error(q: &BigInt, error: &(BigRational, BigRational)) -> Option<(f64, f64)> {
    if q.is_one() || error.0.is_zero() {
        return None;
    }
    let lq = ln_big(q);
    Some((-ln_ratio(&error.1) / lq, -ln_ratio(&error.0) / lq))
}

/// Windowed estimate of `γ(ρ) = limsup γ_n` over `q_n ≡ 0, 1, 3 (mod 4)`.
///
/// `γ_n = 2 + ln(x_{n+1} + q_{n-1}/q_n)/ln q_n` with `x_{n+1}` the complete
/// quotient, so `γ_n` carries a bounded prefactor that decays only like
/// `1/ln q_n`. `value` uses `2 + ln a_{n+1}/ln q_n` instead, which differs
/// from `γ_n` by less than `ln 3/ln q_n` and has the same limsup. `raw` is
/// the plain windowed maximum of `γ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEstimate {
    pub value: f64,
    pub raw: f64,
    /// Index of the convergent attaining `value`.
    pub witness: usize,
    /// Inclusive index range the maxima were taken over.
    pub window: (usize, usize),
}

/// Fraction of the convergents, counted from the deepest, used by
/// [`gamma_limsup`].
pub const DEFAULT_WINDOW: f64 = 0.5;

/// [`gamma_limsup_window`] with [`DEFAULT_WINDOW`].
pub fn gamma_limsup(cf: &CFExpansion, depth: usize) -> Result<GammaEstimate> {
    gamma_limsup_window(cf, depth, DEFAULT_WINDOW)
}

/// Maxima over the last `ceil(fraction · depth)` of the first `depth`
/// convergents, restricted to admissible denominators.
pub fn gamma_limsup_window(cf: &CFExpansion, depth: usize, fraction: f64) -> Result<GammaEstimate> {
    if cf.is_terminated() {
        return Err(Error::FiniteExpansion);
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(crate::error::invalid("fraction", "must lie in (0, 1]"));
    }
    let conv = convergents(cf, depth)?;
    let width = (libm::ceil(fraction * depth as f64) as usize).clamp(1, depth.max(1));
    let start = depth.saturating_sub(width);
    let window = (start, depth.saturating_sub(1));
    let mut best: Option<GammaEstimate> = None;
    for c in conv.iter().skip(start) {
        let (Some(raw), Some(a)) = (c.gamma_n, cf.quotient(c.n + 1)) else {
            continue;
        };
        if c.frac.mod4() == 2 {
            continue;
        }
        let value = 2.0 + ln_big(&a) / ln_big(c.frac.q());
        let b = best.get_or_insert(GammaEstimate {
            value,
            raw,
            witness: c.n,
            window,
        });
        b.raw = b.raw.max(raw);
        if value > b.value {
            b.value = value;
            b.witness = c.n;
        }
    }
    best.ok_or(Error::NoAdmissibleDenominators)
}

/// `α = 1/2 + 1/(2γ)` for `γ ∈ [2, ∞]`.
pub fn holder_exponent(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 2.0 {
        return Err(Error::InadmissibleExponent(gamma));
    }
    Ok(0.5 + 0.5 / gamma)
}

/// An expansion built to have approximation exponent close to `target_gamma`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTarget {
    pub rho: CFExpansion,
    pub target_gamma: f64,
    pub target_alpha: f64,
}

impl ExponentTarget {
    /// Default spacing between large quotients.
    pub const SPACING: usize = 3;

    /// `ρ ∈ (0, 1)` with `depth` known quotients; see [`Self::with_spacing`].
    pub fn new(gamma: f64, depth: usize) -> Result<Self> {
        Self::with_spacing(gamma, depth, Self::SPACING)
    }

    /// Every `spacing` indices the next quotient is set to
    /// `a_{n+1} = round(q_n^{γ-2})`, which makes `γ_n ≈ γ`. The insertion is
    /// postponed while `q_n ≡ 2 (mod 4)`. All other quotients are 1.
    pub fn with_spacing(gamma: f64, depth: usize, spacing: usize) -> Result<Self> {
        if !(gamma >= 2.0 && gamma.is_finite()) {
            return Err(Error::InadmissibleExponent(gamma));
        }
        if spacing == 0 {
            return Err(crate::error::invalid("spacing", "must be positive"));
        }
        let total = depth + LOOKAHEAD + 1;
        let mut quotients = Vec::with_capacity(total);
        let (mut q0, mut q1) = (BigInt::zero(), BigInt::one());
        let mut pending = false;
        for n in 0..total {
            if n > 0 && n % spacing == 0 {
                pending = true;
            }
            let admissible = (&q1 % 4u32).to_u8() != Some(2);
            let a = if pending && admissible {
                pending = false;
                power_round(&q1, gamma - 2.0)
            } else {
                BigInt::one()
            };
            let q2 = &a * &q1 + &q0;
            (q0, q1) = (q1, q2);
            quotients.push(a);
        }
        let rho = CFExpansion::from_quotients(BigInt::zero(), quotients)?
            .with_source(CfSource::Prescribed { gamma, spacing });
        Ok(Self {
            rho,
            target_gamma: gamma,
            target_alpha: holder_exponent(gamma)?,
        })
    }
}

/// `max(1, round(q^e))` for `e ≥ 0`.
fn power_round(q: &BigInt, e: f64) -> BigInt {
    if e == libm::floor(e) && e <= 64.0 {
        return q.pow(e as u32).max(BigInt::one());
    }
    let l2 = e * ln_big(q) / core::f64::consts::LN_2;
    if l2 < 60.0 {
        let v = libm::round(libm::exp2(l2)) as u64;
        return BigInt::from(v.max(1));
    }
    let whole = libm::floor(l2);
    let mant = libm::exp2(l2 - whole + 52.0) as u64;
    BigInt::from(mant) << (whole as u64 - 52)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::{cf_expand, make_rational, CfInput};

    #[test]
    fn golden_conjugate_convergents_are_fibonacci_ratios() {
        let cf = CFExpansion::periodic(0, &[], &[1]).unwrap();
        let c = convergents(&cf, 6).unwrap();
        let got: Vec<_> = c.iter().map(|c| c.frac.to_small().unwrap()).collect();
        assert_eq!(got, [(0, 1), (1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]);
        assert!(c[0].gamma_n.is_none() && c[1].gamma_n.is_none());
        for w in c.windows(2) {
            assert_eq!(w[0].sign, -w[1].sign);
        }
    }

    #[test]
    fn rational_round_trip_and_last_gamma() {
        let r = make_rational(415, 93).unwrap();
        let cf = cf_expand(&CfInput::Exact(r.clone()), 64).unwrap();
        let c = convergents(&cf, 100).unwrap();
        let last = c.last().unwrap();
        assert_eq!(last.frac, r);
        assert_eq!(last.sign, 0);
        assert!(last.gamma_n.is_none());
        assert!(matches!(gamma_limsup(&cf, 5), Err(Error::FiniteExpansion)));
    }

    #[test]
    fn floating_depth_is_limited_by_certification() {
        let cf = cf_expand(&CfInput::Floating { x: 2f64.sqrt(), budget: 1e-6 }, 100).unwrap();
        let n = cf.available().unwrap();
        assert!(convergents(&cf, n).is_ok());
        assert_eq!(
            convergents(&cf, n + 1),
            Err(Error::InsufficientPrecision {
                requested: n + 1,
                available: n
            })
        );
    }

    #[test]
    fn golden_gamma_estimate_approaches_two() {
        let est = gamma_limsup(&CFExpansion::golden(), 30).unwrap();
        assert_eq!(est.window, (15, 29));
        assert!((est.value - 2.0).abs() / 2.0 < 0.02, "{est:?}");
        // q_n = F_{n+1} and |ρ - p_n/q_n| ≈ 1/(√5 q_n²): the raw maximum sits at
        // the smallest admissible q in the window, F_16 = 987.
        let expected_raw = 2.0 + 5f64.sqrt().ln() / 987f64.ln();
        assert!((est.raw - expected_raw).abs() < 1e-5, "{est:?}");
        let deeper = gamma_limsup(&CFExpansion::golden(), 120).unwrap();
        assert!(deeper.raw < est.raw);
    }

    #[test]
    fn prescribed_exponent_is_realised() {
        let t = ExponentTarget::new(4.0, 20).unwrap();
        assert_eq!(t.target_alpha, 0.625);
        let est = gamma_limsup(&t.rho, 20).unwrap();
        assert!((est.value - 4.0).abs() / 4.0 < 0.05, "{est:?}");
        let half = gamma_limsup_window(&t.rho, 20, 0.5).unwrap();
        assert!((half.value - 4.0).abs() / 4.0 < 0.05, "{half:?}");
        let t3 = ExponentTarget::new(3.0, 24).unwrap();
        let est = gamma_limsup(&t3.rho, 24).unwrap();
        assert!((est.value - 3.0).abs() / 3.0 < 0.05, "{est:?}");
        let frac = ExponentTarget::new(2.5, 30).unwrap();
        let est = gamma_limsup(&frac.rho, 30).unwrap();
        assert!((est.value - 2.5).abs() / 2.5 < 0.05, "{est:?}");
        assert!(ExponentTarget::new(1.5, 10).is_err());
    }

    #[test]
    fn holder_exponent_values() {
        assert_eq!(holder_exponent(2.0), Ok(0.75));
        assert!((holder_exponent(3.0).unwrap() - 2.0 / 3.0).abs() < 1e-16);
        assert_eq!(holder_exponent(f64::INFINITY), Ok(0.5));
        assert_eq!(holder_exponent(1.9), Err(Error::InadmissibleExponent(1.9)));
        assert!(holder_exponent(f64::NAN).is_err());
    }
}
