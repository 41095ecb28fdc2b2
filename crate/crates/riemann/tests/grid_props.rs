use std::f64::consts::PI;

use proptest::prelude::*;
use riemann::config::{parse_rational, parse_real, RealSpec};
use riemann::fft::GridPhi;

/// `φ` at `x = j/m` with each phase reduced exactly as `k²j mod m`.
fn naive_grid_phi(j: i64, m: i64, n: i64) -> (f64, f64) {
    let x = j as f64 / m as f64;
    let (mut re, mut im) = (0.0, x / (2.0 * PI));
    for k in 1..=n {
        let r = ((k as i128 * k as i128 * j as i128).rem_euclid(m as i128)) as f64 / m as f64;
        let a = -2.0 * PI * r;
        let w = 1.0 / (2.0 * PI * PI * (k * k) as f64);
        re += (1.0 - a.cos()) * w;
        im -= a.sin() * w;
    }
    (re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grid_values_match_a_naive_sum(m in 2usize..3000, j in -10_000i64..10_000) {
        let g = GridPhi::new(m, 1e-5).unwrap();
        let n = 100_000;
        let (re, im) = naive_grid_phi(j, m as i64, n);
        let tol = g.certified_tol() + 1.0 / (PI * PI * n as f64) + 1e-12;
        let v = g.value(j);
        prop_assert!((v.re - re).abs() <= tol && (v.im - im).abs() <= tol, "{v} vs {re} {im}");
    }

    #[test]
    fn rationals_parse_to_lowest_terms(p in -1_000_000i64..1_000_000, q in 1i64..1_000_000) {
        let r = parse_rational("x", &format!("{p}/{q}")).unwrap();
        let g = num_integer::gcd(p, q);
        prop_assert_eq!(r.p().to_string(), (p / g).to_string());
        prop_assert_eq!(r.q().to_string(), (q / g).to_string());
        match parse_real("x", &format!("{p}/{q}")).unwrap() {
            RealSpec::Exact(e) => prop_assert_eq!(e, r),
            other => prop_assert!(false, "{other:?}"),
        }
    }
}
