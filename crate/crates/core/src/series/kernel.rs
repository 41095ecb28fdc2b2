//! Blocked summation of `Σ_k (Σ_p c_p e(a_p k²)) / k²` with `e(x) = exp(2πix)`.
//!
//! Every block of `LANES * STEPS` consecutive indices starts from phases
//! reduced exactly (rational part in integers, real part in double-double) and
//! advances them by complex multiplication, so no trigonometric call sees a
//! large argument and the multiplicative drift is bounded by the block length.
//! Lanes are interleaved with stride `LANES` to break the dependency chain.
//! Block partial sums are folded in ascending order into a compensated
//! accumulator, so the result does not depend on how a caller chunks `1..=n`.

use core::f64::consts::TAU;

use crate::dd::DoubleDouble;
use crate::ComplexPoint;

const LANES: usize = 8;
const STEPS: usize = 128;
const BLOCK: u64 = (LANES * STEPS) as u64;

/// Coefficient `a` of the quadratic phase `e(a k²)`, held as an exact rational
/// `num/den` plus a double-double real part. Only `a mod 1` matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct QuadPhase {
    num: u64,
    den: u64,
    real: DoubleDouble,
}

impl QuadPhase {
    pub fn real(a: DoubleDouble) -> Self {
        Self {
            num: 0,
            den: 1,
            real: a.frac(),
        }
    }

    pub fn rational(p: i64, q: u64) -> Self {
        debug_assert!(q > 0);
        let num = (p as i128).rem_euclid(q as i128) as u64;
        Self {
            num,
            den: q,
            real: DoubleDouble::ZERO,
        }
    }

    pub fn shifted(self, offset: DoubleDouble) -> Self {
        Self {
            real: self.real.add(offset).frac(),
            ..self
        }
    }

    /// `e(a k²) = 1` for every integer `k`.
    pub fn is_trivial(&self) -> bool {
        self.num == 0 && self.real.is_zero()
    }

    fn rational_frac(&self, r: u128) -> f64 {
        if self.num == 0 {
            return 0.0;
        }
        let den = self.den as u128;
        let v = (r % den) * self.num as u128 % den;
        v as f64 / self.den as f64
    }

    /// `frac(a · m)` for `m < 2^53`.
    fn frac_linear(&self, m: u64) -> f64 {
        let r = self.rational_frac(m as u128);
        let f = self.real.mul_f64(m as f64).frac().to_f64();
        let s = r + f;
        if s >= 1.0 {
            s - 1.0
        } else {
            s
        }
    }

    /// `frac(a · k²)` for `k < 2^53`.
    fn frac_square(&self, k: u64) -> f64 {
        let km = (k as u128) % self.den as u128;
        let r = self.rational_frac(km * km);
        let kf = k as f64;
        let f = self.real.mul_f64(kf).frac().mul_f64(kf).frac().to_f64();
        let s = r + f;
        if s >= 1.0 {
            s - 1.0
        } else {
            s
        }
    }
}

/// `e(f)` for a phase given in cycles.
#[inline]
fn cis(f: f64) -> (f64, f64) {
    let f = if f >= 0.5 { f - 1.0 } else { f };
    let (s, c) = libm::sincos(TAU * f);
    (c, s)
}

#[inline(always)]
fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    re: f64,
    im: f64,
    c_re: f64,
    c_im: f64,
}

#[inline]
fn neumaier(sum: &mut f64, c: &mut f64, v: f64) {
    let t = *sum + v;
    if sum.abs() >= v.abs() {
        *c += (*sum - t) + v;
    } else {
        *c += (v - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn add(&mut self, re: f64, im: f64) {
        neumaier(&mut self.re, &mut self.c_re, re);
        neumaier(&mut self.im, &mut self.c_im, im);
    }

    pub fn value(&self) -> ComplexPoint {
        ComplexPoint::new(self.re + self.c_re, self.im + self.c_im)
    }
}

/// Result of [`quad_sum`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct QuadSum {
    /// `Σ_{k=1}^{n} Σ_p c_p e(a_p k²) / k²`.
    pub oscillatory: ComplexPoint,
    /// `Σ_{k=1}^{n} 1 / k²`.
    pub weights: f64,
}

/// Per-phase multipliers that do not depend on the block.
struct Steppers {
    e2: (f64, f64),
    e2l: (f64, f64),
    u: (f64, f64),
}

impl Steppers {
    fn new(p: &QuadPhase) -> Self {
        let l = LANES as u64;
        Self {
            e2: cis(p.frac_linear(2)),
            e2l: cis(p.frac_linear(2 * l)),
            u: cis(p.frac_linear(2 * l * l)),
        }
    }
}

/// Pairwise lane sum.
#[inline(always)]
fn hsum(v: &[f64; LANES]) -> f64 {
    let mut h = *v;
    let mut w = LANES / 2;
    while w > 0 {
        for j in 0..w {
            h[j] += h[j + w];
        }
        w /= 2;
    }
    h[0]
}

/// Per-phase block sums `Σ_k e(a_p k²)/k²` over `k0..k0 + BLOCK` and the
/// block's `Σ 1/k²`.
#[inline(always)]
fn block<const P: usize>(phases: &[QuadPhase; P], steppers: &[Steppers; P], k0: u64) -> ([(f64, f64); P], f64) {
    let l = LANES as u64;
    let mut wr = [[0.0f64; LANES]; P];
    let mut wi = [[0.0f64; LANES]; P];
    let mut vr = [[0.0f64; LANES]; P];
    let mut vi = [[0.0f64; LANES]; P];
    for p in 0..P {
        let ph = &phases[p];
        let st = &steppers[p];
        let mut w = cis(ph.frac_square(k0));
        let mut d = cis(ph.frac_linear(2 * k0 + 1));
        let mut v = cis(ph.frac_linear(2 * k0 * l + l * l));
        for j in 0..LANES {
            wr[p][j] = w.0;
            wi[p][j] = w.1;
            vr[p][j] = v.0;
            vi[p][j] = v.1;
            w = cmul(w, d);
            d = cmul(d, st.e2);
            v = cmul(v, st.e2l);
        }
    }

    // With w_j(s) = W_j(s)·G_s, G_{s+1} = G_s·u^s, the lane factor W_j
    // advances by the constant v_j(0), and G_s is shared by all lanes.
    let mut kf = [0.0f64; LANES];
    for (j, k) in kf.iter_mut().enumerate() {
        *k = (k0 + j as u64) as f64;
    }
    let stride = LANES as f64;
    let mut g = [(1.0f64, 0.0f64); P];
    let mut hs = [(1.0f64, 0.0f64); P];
    let mut out = [(0.0, 0.0); P];
    let mut sw = [0.0f64; LANES];
    for _ in 0..STEPS {
        let mut inv = [0.0f64; LANES];
        for j in 0..LANES {
            inv[j] = 1.0 / (kf[j] * kf[j]);
            kf[j] += stride;
            sw[j] += inv[j];
        }
        for p in 0..P {
            let (xr, xi) = (&mut wr[p], &mut wi[p]);
            let (dr, di) = (&vr[p], &vi[p]);
            let mut tr = [0.0f64; LANES];
            let mut ti = [0.0f64; LANES];
            for j in 0..LANES {
                tr[j] = xr[j] * inv[j];
                ti[j] = xi[j] * inv[j];
                let nr = xr[j] * dr[j] - xi[j] * di[j];
                let ni = xr[j] * di[j] + xi[j] * dr[j];
                xr[j] = nr;
                xi[j] = ni;
            }
            let t = (hsum(&tr), hsum(&ti));
            let gt = cmul(g[p], t);
            out[p].0 += gt.0;
            out[p].1 += gt.1;
            g[p] = cmul(g[p], hs[p]);
            hs[p] = cmul(hs[p], steppers[p].u);
        }
    }
    (out, sw.iter().sum())
}

/// Runs the blocked kernel over `1..=n` and the per-term remainder, handing
/// each block's per-phase sums to `fold`.
fn drive<const P: usize>(
    phases: &[QuadPhase; P],
    n: u64,
    mut fold: impl FnMut(&[(f64, f64); P]),
    wacc: &mut CompensatedSum,
) {
    let steppers: [Steppers; P] = core::array::from_fn(|p| Steppers::new(&phases[p]));
    let mut k0 = 1u64;
    while n >= BLOCK && k0 <= n - BLOCK + 1 {
        let (sums, w) = block(phases, &steppers, k0);
        fold(&sums);
        wacc.add(w, 0.0);
        k0 += BLOCK;
    }
    // Remainder: exact phase per term.
    for k in k0..=n {
        let kf = k as f64;
        let inv = 1.0 / (kf * kf);
        let terms: [(f64, f64); P] = core::array::from_fn(|p| {
            let (c, s) = cis(phases[p].frac_square(k));
            (c * inv, s * inv)
        });
        fold(&terms);
        wacc.add(inv, 0.0);
    }
}

/// Sums `Σ_{k=1}^{n} (Σ_p coeffs[p] · e(phases[p] · k²)) / k²`.
pub(crate) fn quad_sum<const P: usize>(phases: &[QuadPhase; P], coeffs: &[f64; P], n: u64) -> QuadSum {
    let mut acc = CompensatedSum::default();
    let mut wacc = CompensatedSum::default();
    drive(
        phases,
        n,
        |sums| {
            let (mut re, mut im) = (0.0, 0.0);
            for p in 0..P {
                re += coeffs[p] * sums[p].0;
                im += coeffs[p] * sums[p].1;
            }
            acc.add(re, im);
        },
        &mut wacc,
    );
    QuadSum {
        oscillatory: acc.value(),
        weights: wacc.value().re,
    }
}

/// `Σ_{k=1}^{n} e(phases[p] · k²) / k²` for each phase separately, sharing
/// the index loop.
pub(crate) fn quad_sums<const P: usize>(phases: &[QuadPhase; P], n: u64) -> ([ComplexPoint; P], f64) {
    let mut acc = [CompensatedSum::default(); P];
    let mut wacc = CompensatedSum::default();
    drive(
        phases,
        n,
        |sums| {
            for p in 0..P {
                acc[p].add(sums[p].0, sums[p].1);
            }
        },
        &mut wacc,
    );
    (core::array::from_fn(|p| acc[p].value()), wacc.value().re)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Term-by-term reference with an exactly reduced phase for every `k`.
    fn reference<const P: usize>(phases: &[QuadPhase; P], coeffs: &[f64; P], n: u64) -> ComplexPoint {
        let mut acc = CompensatedSum::default();
        for k in 1..=n {
            let kf = k as f64;
            for p in 0..P {
                let (c, s) = cis(phases[p].frac_square(k));
                acc.add(coeffs[p] * c / (kf * kf), coeffs[p] * s / (kf * kf));
            }
        }
        acc.value()
    }

    #[test]
    fn blocked_sum_matches_per_term_reduction() {
        let phases = [
            QuadPhase::real(DoubleDouble::from_f64(0.123456789)),
            QuadPhase::rational(-3, 7).shifted(DoubleDouble::from_f64(-2.5e-6)),
        ];
        for n in [1u64, 7, 511, 512, 513, 5_000, 100_003] {
            let blocked = quad_sum(&phases, &[1.0, -0.5], n);
            let exact = reference(&phases, &[1.0, -0.5], n);
            assert!(
                (blocked.oscillatory - exact).norm() < 1e-13,
                "n = {n}: {} vs {}",
                blocked.oscillatory,
                exact
            );
        }
    }

    #[test]
    fn weights_are_partial_basel_sums() {
        let s = quad_sum(&[QuadPhase::rational(0, 1)], &[1.0], 10_000);
        let expected: f64 = (1..=10_000u64).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
        assert!((s.weights - expected).abs() < 1e-15);
        assert!((s.oscillatory.re - expected).abs() < 1e-15);
        assert!(s.oscillatory.im.abs() < 1e-15);
    }

    #[test]
    fn rational_phase_is_exactly_periodic() {
        // a = 1/4: e(k²/4) is 1 for even k and i for odd k.
        let p = QuadPhase::rational(1, 4);
        for k in 1..50u64 {
            let f = p.frac_square(k);
            assert_eq!(f, if k % 2 == 0 { 0.0 } else { 0.25 });
        }
    }

    #[test]
    fn huge_indices_reduce_without_losing_the_phase() {
        // a = 1/3 as a real double-double vs exact rational: differ only by
        // the representation error of 1/3, amplified by k².
        let k = 1_000_000_007u64;
        let exact = QuadPhase::rational(1, 3).frac_square(k);
        let third = DoubleDouble {
            hi: 1.0 / 3.0,
            lo: 1.850371707708594e-17,
        };
        let approx = QuadPhase::real(third).frac_square(k);
        assert!((exact - approx).abs() < 1e-12, "{exact} vs {approx}");
    }
}
