use std::f64::consts::FRAC_1_SQRT_2;

/// Standard normal CDF, `Phi(z) = (1 / sqrt(2 pi)) * int_{-inf}^{z} exp(-y^2 / 2) dy`.
///
/// Evaluated through `erfc` in both tails so neither side loses relative
/// accuracy; saturates to exactly 0 or 1 far out.
pub fn probability_integral(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}
