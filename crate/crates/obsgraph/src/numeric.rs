//! Small numeric helpers used by several modules.

use std::f64::consts::PI;

/// Greatest common divisor (Euclid's algorithm).
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Reduce an angle into `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    let mut y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y >= PI {
        y = -PI;
    }
    y
}

/// Fractional part `{n·α} ∈ [0, 1)` computed with a Veltkamp split of `α`,
/// so the integer-scale part of the product is exact for `|n| ≤ 2^26` and the
/// accumulated drift stays below ~1e-9 at |n| ≤ 1e7.
pub fn frac_mul(n: i64, alpha: f64) -> f64 {
    let nf = n as f64;
    if n.unsigned_abs() >= (1 << 26) {
        // Outside the exact-split range; plain product (desk scale never hits this).
        return (nf * alpha).rem_euclid(1.0);
    }
    let split = 134_217_729.0; // 2^27 + 1
    let s = alpha * split;
    let hi = s - (s - alpha);
    let lo = alpha - hi;
    let prod_hi = nf * hi; // exact: ≤ 26 + 27 significant bits
    let frac = (prod_hi - prod_hi.floor()) + nf * lo;
    frac.rem_euclid(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_basics() {
        assert_eq!(gcd(6, 4), 2);
        assert_eq!(gcd(4, 0), 4);
        assert_eq!(gcd(0, 4), 4);
        assert_eq!(gcd(7, 5), 1);
    }

    #[test]
    fn wrap_angle_range() {
        for k in -10..10 {
            let x = 0.7 * k as f64;
            let w = wrap_angle(x);
            assert!((-PI..PI).contains(&w), "wrap({x}) = {w}");
            let turns = (w - x) / (2.0 * PI);
            assert!(
                (turns - turns.round()).abs() < 1e-12,
                "wrap differs by whole turns"
            );
        }
        assert_eq!(wrap_angle(PI), -PI);
        assert_eq!(wrap_angle(-PI), -PI);
        assert_eq!(wrap_angle(0.0), 0.0);
    }

    #[test]
    fn frac_mul_matches_reference_at_moderate_n() {
        let alpha = std::f64::consts::SQRT_2;
        for n in [-1000i64, -7, 0, 1, 12, 99_991] {
            let direct = (n as f64 * alpha).rem_euclid(1.0);
            let split = frac_mul(n, alpha);
            assert!((direct - split).abs() < 1e-9, "n={n}: {direct} vs {split}");
        }
    }

    #[test]
    fn frac_mul_rational_alpha_is_exact() {
        // α = 1/4 gives exactly representable products.
        for n in 0..64i64 {
            let f = frac_mul(n, 0.25);
            assert_eq!(f, (n % 4) as f64 / 4.0);
        }
    }
}
