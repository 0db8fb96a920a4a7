use super::series::DoubleDouble;
use crate::error::{Error, Result};

// Ai(0) = 3^(-2/3) / Gamma(2/3) and -Ai'(0) = 3^(-1/3) / Gamma(1/3), split into hi + lo.
const AI0: DoubleDouble = DoubleDouble::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
const MINUS_AI0_PRIME: DoubleDouble = DoubleDouble::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

const MAX_ABS_ARG: f64 = 10.0;
const MAX_TERMS: usize = 200;

/// Airy function `Ai(z)` for `|z| <= 10`, from its Maclaurin series.
///
/// Summed in double-double arithmetic: at `z = 10` the two power series reach
/// about 1e9 while `Ai(10)` is about 1e-10, so plain `f64` would keep no digits.
pub fn airy_ai(z: f64) -> Result<f64> {
    if !(z.abs() <= MAX_ABS_ARG) {
        return Err(Error::Domain {
            function: "airy_ai",
            value: z,
            domain: "[-10, 10]",
        });
    }
    let z_dd = DoubleDouble::from_f64(z);
    let z3 = z_dd.mul(z_dd).mul(z_dd);

    // f(z) = sum 3^k (1/3)_k z^(3k) / (3k)!, g(z) = sum 3^k (2/3)_k z^(3k+1) / (3k+1)!
    let mut f_term = DoubleDouble::from_f64(1.0);
    let mut g_term = z_dd;
    let mut f_sum = f_term;
    let mut g_sum = g_term;
    for k in 0..MAX_TERMS {
        let k3 = 3.0 * k as f64;
        f_term = f_term.mul(z3).div_f64((k3 + 2.0) * (k3 + 3.0));
        g_term = g_term.mul(z3).div_f64((k3 + 3.0) * (k3 + 4.0));
        f_sum = f_sum.add(f_term);
        g_sum = g_sum.add(g_term);
        let scale = f_sum.hi.abs().max(g_sum.hi.abs()).max(1.0);
        if f_term.hi.abs() < 1e-34 * scale && g_term.hi.abs() < 1e-34 * scale {
            break;
        }
    }
    Ok(AI0.mul(f_sum).add(MINUS_AI0_PRIME.mul(g_sum).neg()).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin() {
        let v = airy_ai(0.0).unwrap();
        assert!((v - 0.355_028_053_887_817_24).abs() < 1e-16);
    }

    #[test]
    fn derivative_at_origin_by_central_difference() {
        let h = 1e-5;
        let d = (airy_ai(h).unwrap() - airy_ai(-h).unwrap()) / (2.0 * h);
        assert!((d + MINUS_AI0_PRIME.to_f64()).abs() < 1e-10);
    }

    #[test]
    fn reference_values() {
        // 40-digit references.
        let cases = [
            (-10.0, 0.040_241_238_486_443_190_69),
            (-5.0, 0.350_761_009_024_114_319_8),
            (-1.0, 0.535_560_883_292_352_118_8),
            (1.0, 0.135_292_416_312_881_415_5),
            (2.5, 0.015_725_923_380_470_489_99),
            (5.0, 1.083_444_281_360_744_173e-4),
            (7.5, 1.917_256_067_513_430_752e-7),
            (10.0, 1.104_753_255_289_868_593e-10),
        ];
        for (z, expected) in cases {
            let v = airy_ai(z).unwrap();
            assert!(((v - expected) / expected).abs() < 1e-10, "z = {z}: {v} vs {expected}");
        }
    }

    #[test]
    fn range_error() {
        assert!(airy_ai(10.5).is_err());
        assert!(airy_ai(f64::NAN).is_err());
    }
}
