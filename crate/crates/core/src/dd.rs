//! Minimal double-double arithmetic for phase reduction.
//!
//! Only what the quadratic-phase kernel needs: sums, products by an `f64`
//! and fractional parts. Products use Dekker's split, so no hardware FMA is
//! assumed.

/// `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

pub(crate) const TAU: DoubleDouble = DoubleDouble {
    hi: core::f64::consts::TAU,
    lo: 2.4492935982947064e-16,
};

pub(crate) const INV_TAU: DoubleDouble = DoubleDouble {
    hi: 0.15915494309189535,
    lo: -9.839338337591243e-18,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }

    /// Fractional part in `[0, 1)`, exact up to one unit in the last place of
    /// the low word (values within that of 1 collapse to 0).
    pub fn frac(self) -> Self {
        let fl = libm::floor(self.hi);
        let (s, e) = two_sum(self.hi, -fl);
        let (s, f) = two_sum(s, self.lo);
        let (mut hi, mut lo) = quick_two_sum(s, e + f);
        if hi < 0.0 {
            let (a, b) = two_sum(hi, 1.0);
            (hi, lo) = quick_two_sum(a, b + lo);
        } else if hi >= 1.0 {
            let (a, b) = two_sum(hi, -1.0);
            (hi, lo) = quick_two_sum(a, b + lo);
        }
        // `hi` rounds up to exactly 1 when the true value is 1 - tiny; as a
        // phase that is 0 up to |lo|.
        if hi >= 1.0 {
            return Self::ZERO;
        }
        Self { hi, lo }
    }

    /// Integer part (`floor`) of the value, as `f64`.
    pub fn floor(self) -> f64 {
        let fl = libm::floor(self.hi);
        if fl == self.hi && self.lo < 0.0 {
            fl - 1.0
        } else {
            fl
        }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_product_recovers_one() {
        // fl(1/2π) · 2π differs from 1 by the rounding of the reciprocal only.
        let t = 1.0 / core::f64::consts::TAU;
        let x = TAU.mul_f64(t);
        assert!((x.hi - 1.0).abs() < 1e-16);
        assert!((x.to_f64() - 1.0).abs() < 2e-16);
    }

    #[test]
    fn frac_of_large_product_keeps_digits() {
        // 0.1 · 3^33: the double 0.1 is 0x3FB999999999999A; check against exact
        // integer arithmetic on the mantissa.
        let k = 5_559_060_566_555_523.0_f64; // 3^33, exact in f64
        let x = DoubleDouble::from_f64(0.1).mul_f64(k).frac();
        let m: u128 = 0x1999999999999A; // mantissa of 0.1 with exponent -56
        let prod = m * 5_559_060_566_555_523u128;
        let frac = (prod & ((1u128 << 56) - 1)) as f64 / (1u128 << 56) as f64;
        assert!((x.to_f64() - frac).abs() < 1e-15);
    }

    #[test]
    fn frac_handles_negative_values() {
        let x = DoubleDouble::from_f64(-2.25).frac();
        assert_eq!(x.to_f64(), 0.75);
        let y = DoubleDouble { hi: 3.0, lo: -1e-20 }.frac();
        assert!(y.hi == 0.0 || y.hi > 0.999);
        let z = DoubleDouble { hi: 3.0, lo: -1e-3 }.frac();
        assert_eq!(z.to_f64(), 0.999);
        assert_eq!(DoubleDouble { hi: 3.0, lo: -1e-20 }.floor(), 2.0);
        // 1 - 0.1 is not exact in f64; the low word must carry the rest.
        let w = DoubleDouble::from_f64(-0.1).frac();
        assert_eq!(w.hi, 0.9);
        let back = w.add(DoubleDouble::from_f64(0.1));
        assert_eq!(back.hi, 1.0);
        assert!(back.lo.abs() < 1e-32);
    }
}
