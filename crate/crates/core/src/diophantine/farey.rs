use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::rational::Rational;
use crate::error::invalid;
use crate::Result;

/// Euler's totient of `0..=n` by a linear sieve (`φ(0)` is reported as 0).
pub fn totients(n: usize) -> Vec<u64> {
    let mut phi = vec![0u64; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        phi[1] = 1;
    }
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = i as u64 - 1;
            primes.push(i);
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            if i % p == 0 {
                phi[m] = phi[i] * p as u64;
                break;
            }
            phi[m] = phi[i] * (p as u64 - 1);
        }
    }
    phi
}

/// Irreducible `p/q` with `1 ≤ p < q` and `q_min ≤ q ≤ q_max`, ordered by `q`
/// and then `p`.
#[derive(Debug, Clone)]
pub struct FareyIter {
    p: u64,
    q: u64,
    q_max: u64,
}

impl FareyIter {
    pub fn new(q_min: u64, q_max: u64) -> Result<Self> {
        if q_min < 2 || q_min > q_max {
            return Err(invalid("q_min", "need 2 ≤ q_min ≤ q_max"));
        }
        Ok(Self {
            p: 0,
            q: q_min,
            q_max,
        })
    }
}

impl Iterator for FareyIter {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        while self.q <= self.q_max {
            self.p += 1;
            if self.p >= self.q {
                self.p = 0;
                self.q += 1;
                continue;
            }
            if self.p.gcd(&self.q) == 1 {
                return Some((self.p, self.q));
            }
        }
        None
    }
}

/// Collected [`FareyIter`] as [`Rational`]s.
pub fn farey_enumerate(q_min: u64, q_max: u64) -> Result<Vec<Rational>> {
    Ok(FareyIter::new(q_min, q_max)?
        .map(|(p, q)| Rational::from_reduced(p.into(), q.into()))
        .collect())
}
