use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_78;

fn lanczos_sum(zm1: f64) -> f64 {
    let mut x = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (zm1 + i as f64);
    }
    x
}

/// `sin(pi * x)` with the argument reduced exactly before scaling by pi.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    // r in [-1, 1]; fold onto [-1/2, 1/2] to keep the small-argument accuracy.
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z == z.floor()
}

/// Gamma function on the real line.
///
/// Positive integers up to 171 are returned as exact products; other
/// arguments use the Lanczos (g = 7, n = 9) approximation with the reflection
/// formula for `z < 1/2`.
pub fn gamma(z: f64) -> Result<f64> {
    if z.is_nan() {
        return Ok(f64::NAN);
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(z));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: f64) -> f64 {
    if z == z.floor() && (1.0..=171.0).contains(&z) {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < z {
            acc *= k;
            k += 1.0;
        }
        return acc;
    }
    if z < 0.5 {
        return PI / (sin_pi(z) * gamma_unchecked(1.0 - z));
    }
    let zm1 = z - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    let x = lanczos_sum(zm1);
    // Split the power so that t^(z+1/2) does not overflow before e^-t damps it.
    let half_pow = t.powf(0.5 * (zm1 + 0.5));
    (2.0 * PI).sqrt() * half_pow * (half_pow * (-t).exp()) * x
}

/// `ln |Gamma(z)|`, finite away from the poles.
pub fn ln_gamma(z: f64) -> f64 {
    if z < 0.5 {
        return PI.ln() - sin_pi(z).abs().ln() - ln_gamma(1.0 - z);
    }
    let zm1 = z - 1.0;
    let t = zm1 + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (zm1 + 0.5) * t.ln() - t + lanczos_sum(zm1).ln()
}

/// `1 / Gamma(z)`, which is entire: exactly zero at the poles of Gamma.
pub fn recip_gamma(z: f64) -> f64 {
    if is_nonpositive_integer(z) {
        return 0.0;
    }
    if z < 0.5 {
        // 1/Gamma(z) = sin(pi z) Gamma(1 - z) / pi
        let g = gamma_unchecked(1.0 - z);
        if g.is_finite() {
            return sin_pi(z) * g / PI;
        }
        let s = sin_pi(z);
        return s.signum() * (ln_gamma(1.0 - z) + s.abs().ln() - PI.ln()).exp();
    }
    let g = gamma_unchecked(z);
    if g.is_finite() {
        1.0 / g
    } else {
        (-ln_gamma(z)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn classical_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.5).unwrap(), 0.5 * PI.sqrt()) < 1e-14);
        assert!(rel(gamma(-0.5).unwrap(), -2.0 * PI.sqrt()) < 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        for z in [0.0, -1.0, -2.0, -17.0] {
            assert_eq!(gamma(z), Err(Error::Pole(z)));
            assert_eq!(recip_gamma(z), 0.0);
        }
    }

    #[test]
    fn recurrence_over_wide_range() {
        // Gamma(z + 1) = z Gamma(z) to 12 significant digits on |z| <= 50.
        let mut z = -49.73;
        while z < 49.5 {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(rel(lhs, rhs) < 1e-12, "z = {z}");
            z += 0.917;
        }
    }

    #[test]
    fn reference_values() {
        // Gamma(1/3), Gamma(2/3), Gamma(50.5) from 40-digit references.
        assert!(rel(gamma(1.0 / 3.0).unwrap(), 2.678_938_534_707_747_6) < 1e-14);
        assert!(rel(gamma(2.0 / 3.0).unwrap(), 1.354_117_939_426_400_4) < 1e-14);
        assert!(rel(gamma(50.5).unwrap(), 4.290_462_912_351_959_8e63) < 1e-12);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for z in [0.1, 0.7, 3.3, 12.0, 40.0, 150.0] {
            let lg = ln_gamma(z);
            assert!(
                (lg - gamma(z).unwrap().ln()).abs() < 1e-12 * lg.abs().max(1.0),
                "z = {z}"
            );
        }
        assert!((ln_gamma(-2.5) - gamma(-2.5).unwrap().abs().ln()).abs() < 1e-12);
    }

    #[test]
    fn recip_gamma_large_negative() {
        // Gamma(172 + 1e-7) overflows but 1/Gamma(-171 - 1e-7) is finite.
        let v = recip_gamma(-171.0 - 1e-7);
        assert!(rel(v, 1.241_018_634_993_012_031_8e302) < 1e-11, "{v:e}");
    }
}
