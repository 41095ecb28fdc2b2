use core::f64::consts::{PI, TAU};

/// A point of the image curve in the complex plane.
pub type ComplexPoint = num_complex::Complex64;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = libm::remainder(a, TAU);
    if r <= -PI {
        r += TAU;
    }
    r
}

/// Geodesic distance between the directions of two non-zero points, in `[0, π]`.
pub fn angular_distance(a: ComplexPoint, b: ComplexPoint) -> f64 {
    // arg(a · conj(b)) is the signed angle from b to a.
    let z = a * b.conj();
    libm::atan2(z.im, z.re).abs()
}

/// `z / |z|`, or `None` for zero or non-finite input.
pub fn unit(z: ComplexPoint) -> Option<ComplexPoint> {
    let n = z.norm();
    if n > 0.0 && n.is_finite() {
        Some(z / n)
    } else {
        None
    }
}

pub(crate) fn is_finite(z: ComplexPoint) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_stays_in_half_open_interval() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(7.0 * TAU + 0.25) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn angular_distance_is_geodesic() {
        let a = ComplexPoint::from_polar(1.0, 3.0);
        let b = ComplexPoint::from_polar(2.0, -3.0);
        assert!((angular_distance(a, b) - (TAU - 6.0)).abs() < 1e-12);
        assert_eq!(angular_distance(a, a), 0.0);
    }

    #[test]
    fn unit_rejects_zero() {
        assert!(unit(ComplexPoint::new(0.0, 0.0)).is_none());
        let u = unit(ComplexPoint::new(3.0, 4.0)).unwrap();
        assert!((u.norm() - 1.0).abs() < 1e-15);
    }
}
