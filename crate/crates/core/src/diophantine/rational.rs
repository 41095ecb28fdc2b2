use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Irreducible fraction `p/q` with `q ≥ 1`, tagged with `q mod 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    p: BigInt,
    q: BigInt,
    mod4: u8,
}

/// Builds the reduced form of `p/q`.
pub fn make_rational(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Rational> {
    let (p, q) = (p.into(), q.into());
    if q.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    if q.is_negative() {
        return Err(crate::error::invalid("q", "must be positive"));
    }
    let g = p.gcd(&q);
    Ok(Rational::from_reduced(p / &g, q / g))
}

impl Rational {
    pub(crate) fn from_reduced(p: BigInt, q: BigInt) -> Self {
        debug_assert!(q.is_positive());
        let mod4 = (&q % 4u32).to_u8().unwrap_or(0);
        Self { p, q, mod4 }
    }

    pub(crate) fn from_ratio(r: &BigRational) -> Self {
        Self::from_reduced(r.numer().clone(), r.denom().clone())
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn mod4(&self) -> u8 {
        self.mod4
    }

    pub fn to_ratio(&self) -> BigRational {
        BigRational::new_raw(self.p.clone(), self.q.clone())
    }

    /// `(p, q)` when both fit machine integers.
    pub fn to_small(&self) -> Option<(i64, u64)> {
        Some((self.p.to_i64()?, self.q.to_u64()?))
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.p, &self.q)
    }

    pub fn is_integer(&self) -> bool {
        self.q.is_one()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Natural logarithm of a positive big integer.
pub(crate) fn ln_big(x: &BigInt) -> f64 {
    debug_assert!(x.sign() == Sign::Plus);
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// Natural logarithm of a positive big rational.
pub(crate) fn ln_ratio(r: &BigRational) -> f64 {
    ln_big(r.numer()) - ln_big(r.denom())
}

/// `p/q` rounded to `f64` without overflowing intermediate conversions.
pub(crate) fn ratio_to_f64(p: &BigInt, q: &BigInt) -> f64 {
    if p.is_zero() {
        return 0.0;
    }
    let (pb, qb) = (p.bits() as i64, q.bits() as i64);
    // Scale so that the quotient keeps 64 significant bits.
    let e = pb - qb - 64;
    let (num, den) = if e >= 0 {
        (p.clone(), q << (e as u64))
    } else {
        (p << ((-e) as u64), q.clone())
    };
    let m = (num / den).to_f64().unwrap_or(f64::NAN);
    libm::ldexp(m, e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_residue() {
        let a = make_rational(2, 4).unwrap();
        assert_eq!((a.p().clone(), a.q().clone(), a.mod4()), (1.into(), 2.into(), 2));
        let b = make_rational(3, 9).unwrap();
        assert_eq!(b.to_string(), "1/3");
        assert_eq!(b.mod4(), 3);
        let c = make_rational(0, 1).unwrap();
        assert_eq!((c.to_small(), c.mod4()), (Some((0, 1)), 1));
        assert_eq!(make_rational(-6, 8).unwrap().to_small(), Some((-3, 4)));
        assert_eq!(make_rational(0, 7).unwrap().to_small(), Some((0, 1)));
        assert_eq!(make_rational(1, 0), Err(Error::ZeroDenominator));
        assert!(make_rational(1, -2).is_err());
    }

    #[test]
    fn big_logs_and_quotients() {
        let x = BigInt::from(10u32).pow(400);
        assert!((ln_big(&x) - 400.0 * core::f64::consts::LN_10).abs() < 1e-9);
        let q = BigInt::from(3u32).pow(700);
        let p = &q * 2 + 1;
        assert!((ratio_to_f64(&p, &q) - 2.0).abs() < 1e-15);
        assert_eq!(ratio_to_f64(&BigInt::from(-1), &BigInt::from(4)), -0.25);
    }
}
