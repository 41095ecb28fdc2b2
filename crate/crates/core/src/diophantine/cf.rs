use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{ratio_to_f64, Rational};
use crate::error::invalid;
use crate::Result;

/// Where the partial quotients of an expansion come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CfSource {
    /// Euclid's algorithm on an exact rational.
    Exact,
    /// A real known to lie in `[x - budget, x + budget]`.
    Floating { budget: f64 },
    /// Periodic quotients of a quadratic irrational.
    Quadratic,
    /// Quotients chosen to realise a target approximation exponent.
    Prescribed { gamma: f64, spacing: usize },
    /// Quotients supplied by the caller.
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tail {
    /// The expansion is complete (rational value).
    Terminated,
    /// `quotients[start..]` repeats forever.
    Periodic { start: usize },
    /// Further quotients exist but are unknown.
    Open,
}

/// Input accepted by [`cf_expand`].
#[derive(Debug, Clone, PartialEq)]
pub enum CfInput {
    Exact(Rational),
    Floating { x: f64, budget: f64 },
}

/// Continued fraction `[a0; a1, a2, ...]`.
///
/// Quotients `a_k` for `k ≥ 1` are positive. A finite expansion of a rational
/// is canonical: its last quotient is at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CFExpansion {
    a0: BigInt,
    quotients: Vec<BigInt>,
    tail: Tail,
    source: CfSource,
}

impl CFExpansion {
    /// Periodic expansion `[a0; prefix, period, period, ...]`.
    pub fn periodic(a0: i64, prefix: &[u64], period: &[u64]) -> Result<Self> {
        if period.is_empty() {
            return Err(invalid("period", "must be non-empty"));
        }
        if prefix.iter().chain(period).any(|&a| a == 0) {
            return Err(invalid("quotients", "must be positive"));
        }
        let quotients = prefix.iter().chain(period).map(|&a| BigInt::from(a)).collect();
        Ok(Self {
            a0: a0.into(),
            quotients,
            tail: Tail::Periodic {
                start: prefix.len(),
            },
            source: CfSource::Quadratic,
        })
    }

    /// `(1 + √5)/2 = [1; 1, 1, ...]`.
    pub fn golden() -> Self {
        Self::periodic(1, &[], &[1]).expect("valid period")
    }

    /// `√n` for a non-square `n ≥ 2`.
    pub fn sqrt(n: u64) -> Result<Self> {
        let r = n.sqrt();
        if n < 2 || r * r == n {
            return Err(invalid("n", "must be a non-square integer ≥ 2"));
        }
        // Classical recurrence on (m, d, a); the period ends at a = 2·a0.
        let (mut m, mut d, mut a) = (0u64, 1u64, r);
        let mut period = Vec::new();
        loop {
            m = d * a - m;
            d = (n - m * m) / d;
            a = (r + m) / d;
            period.push(a);
            if a == 2 * r {
                break;
            }
        }
        Self::periodic(r as i64, &[], &period)
    }

    /// Caller-supplied quotients with an unknown continuation.
    pub fn from_quotients(a0: BigInt, quotients: Vec<BigInt>) -> Result<Self> {
        if quotients.iter().any(|a| !a.is_positive()) {
            return Err(invalid("quotients", "must be positive"));
        }
        Ok(Self {
            a0,
            quotients,
            tail: Tail::Open,
            source: CfSource::Synthetic,
        })
    }

    pub(crate) fn with_source(mut self, source: CfSource) -> Self {
        self.source = source;
        self
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn source(&self) -> CfSource {
        self.source
    }

    /// The expansion is complete, i.e. the value is rational.
    pub fn is_terminated(&self) -> bool {
        self.tail == Tail::Terminated
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self.tail, Tail::Periodic { .. })
    }

    /// Number of known quotients after `a0`; `None` when unbounded.
    pub fn available(&self) -> Option<usize> {
        match self.tail {
            Tail::Periodic { .. } => None,
            _ => Some(self.quotients.len()),
        }
    }

    /// Partial quotient `a_k` (`a_0` for `k = 0`).
    pub fn quotient(&self, k: usize) -> Option<BigInt> {
        if k == 0 {
            return Some(self.a0.clone());
        }
        let i = k - 1;
        match self.tail {
            _ if i < self.quotients.len() => Some(self.quotients[i].clone()),
            Tail::Periodic { start } => {
                let len = self.quotients.len() - start;
                Some(self.quotients[start + (i - start) % len].clone())
            }
            _ => None,
        }
    }

    /// `a_1, ..., a_n` (fewer when the expansion is shorter).
    pub fn prefix(&self, n: usize) -> Vec<BigInt> {
        (1..=n).map_while(|k| self.quotient(k)).collect()
    }

    /// Value of the deepest convergent computed from at most `n` quotients.
    pub(crate) fn convergent_value(&self, n: usize) -> BigRational {
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (self.a0.clone(), BigInt::one());
        for a in self.prefix(n) {
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
        }
        BigRational::new(p1, q1)
    }

    /// Nearest `f64` to the value (to a deep convergent for infinite tails).
    pub fn to_f64(&self) -> f64 {
        let n = self.available().unwrap_or(80).min(4000);
        let v = self.convergent_value(n);
        ratio_to_f64(v.numer(), v.denom())
    }
}

/// Expands an exact rational or a floating value with an error budget.
///
/// Floating inputs keep only quotients shared by every real in
/// `[x - budget, x + budget]`; the expansion then stops with an open tail.
/// At most `max_terms` quotients after `a0` are produced.
pub fn cf_expand(input: &CfInput, max_terms: usize) -> Result<CFExpansion> {
    if max_terms == 0 {
        return Err(invalid("max_terms", "must be at least 1"));
    }
    match input {
        CfInput::Exact(r) => Ok(expand_exact(r.p().clone(), r.q().clone(), max_terms)),
        CfInput::Floating { x, budget } => expand_interval(*x, *budget, max_terms),
    }
}

fn expand_exact(mut num: BigInt, mut den: BigInt, max_terms: usize) -> CFExpansion {
    let (a0, r) = num.div_mod_floor(&den);
    (num, den) = (den, r);
    let mut quotients = Vec::new();
    while !den.is_zero() && quotients.len() < max_terms {
        let (a, r) = num.div_mod_floor(&den);
        quotients.push(a);
        (num, den) = (den, r);
    }
    CFExpansion {
        a0,
        quotients,
        tail: if den.is_zero() {
            Tail::Terminated
        } else {
            Tail::Open
        },
        source: CfSource::Exact,
    }
}

fn expand_interval(x: f64, budget: f64, max_terms: usize) -> Result<CFExpansion> {
    if !x.is_finite() {
        return Err(invalid("x", "must be finite"));
    }
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(invalid("budget", "must be finite and non-negative"));
    }
    let xr = BigRational::from_float(x).expect("finite");
    let br = BigRational::from_float(budget).expect("finite");
    if br.is_zero() {
        let r = Rational::from_ratio(&xr);
        let cf = expand_exact(r.p().clone(), r.q().clone(), max_terms);
        return Ok(cf.with_source(CfSource::Floating { budget }));
    }
    let lo = &xr - &br;
    let hi = &xr + &br;
    let (mut ln, mut ld) = (lo.numer().clone(), lo.denom().clone());
    let (mut hn, mut hd) = (hi.numer().clone(), hi.denom().clone());

    let (la, lr) = ln.div_mod_floor(&ld);
    let (ha, hr) = hn.div_mod_floor(&hd);
    let mut cf = CFExpansion {
        a0: BigInt::from(libm::floor(x) as i64),
        quotients: Vec::new(),
        tail: Tail::Open,
        source: CfSource::Floating { budget },
    };
    if la != ha || lr.is_zero() || hr.is_zero() {
        return Ok(cf);
    }
    cf.a0 = la;
    (ln, ld, hn, hd) = (ld, lr, hd, hr);
    while cf.quotients.len() < max_terms {
        let (la, lr) = ln.div_mod_floor(&ld);
        let (ha, hr) = hn.div_mod_floor(&hd);
        // An endpoint that terminates here sits on the boundary of the
        // cylinder; its neighbours on one side have a different quotient.
        if la != ha || lr.is_zero() || hr.is_zero() {
            break;
        }
        cf.quotients.push(la);
        (ln, ld, hn, hd) = (ld, lr, hd, hr);
    }
    Ok(cf)
}
