//! Seeded random inputs shared by the subcommands and the acceptance suite.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riemann_core::diophantine::CFExpansion;

/// Independent streams of one seed.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Quotients after `a0` of a random irrational.
pub const IRRATIONAL_DEPTH: usize = 48;

/// `ρ = [0; a1, a2, ...]` with `a_k = ⌊1/u_k⌋`, `u_k` uniform in `(0, 1]`
/// (heavy-tailed quotients, as for a uniformly drawn real), and an unknown
/// continuation.
pub fn random_irrational(rng: &mut impl Rng) -> CFExpansion {
    let quotients = (0..IRRATIONAL_DEPTH)
        .map(|_| {
            let u = 1.0 - rng.gen::<f64>();
            BigInt::from((1.0 / u).floor().to_u64().unwrap_or(u64::MAX).max(1))
        })
        .collect();
    CFExpansion::from_quotients(BigInt::from(0), quotients).expect("positive quotients")
}

/// Irreducible `p/q ∈ [0, 1)` with `q` uniform in `1..=q_max`, and an offset
/// with `|h|` log-uniform in `[floor, 1/q²]` and a random sign.
pub fn lemma_sample(rng: &mut impl Rng, q_max: u64, floor: f64) -> (i64, u64, f64) {
    let q = rng.gen_range(1..=q_max);
    let p = loop {
        let p = rng.gen_range(0..q);
        if num_integer::gcd(p, q) == 1 {
            break p;
        }
    };
    let (lo, hi) = (floor.ln(), (1.0 / (q * q) as f64).ln());
    let mag = (lo + (hi - lo) * rng.gen::<f64>()).exp().clamp(floor, 1.0 / (q * q) as f64);
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    (p as i64, q, sign * mag)
}
