//! Independent reference implementations used by the integration tests.
//! None of these call into the library's special functions or quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `F_alpha(z)` from the Hankel contour collapsed onto the negative axis,
///
/// ```text
/// F_alpha(z) = (1 / (pi alpha)) int_0^inf exp(-s^(1/alpha) - z s cos(pi alpha))
///              sin(pi alpha - z s sin(pi alpha)) ds,
/// ```
///
/// which is accurate for moderate `z` (cancellation grows with `z`).
pub fn f_alpha_hankel(alpha: f64, z: f64) -> f64 {
    let (sin, cos) = (PI * alpha).sin_cos();
    // Decay of the envelope: stop once s^(1/alpha) - z s |cos| > 60.
    let mut s_max: f64 = 1.0;
    while s_max.powf(1.0 / alpha) - z * s_max * cos.abs() < 60.0 {
        s_max *= 1.2;
    }
    let f = |s: f64| (-s.powf(1.0 / alpha) - z * s * cos).exp() * (PI * alpha - z * s * sin).sin();
    // s = s_max v^4 smooths the s^(1/alpha) cusp at the origin.
    let g = |v: f64| 4.0 * s_max * v.powi(3) * f(s_max * v.powi(4));
    simpson(g, 0.0, 1.0, 200_000) / (PI * alpha)
}

/// Peak of the log-envelope `-s^(1/alpha) - z s cos(pi alpha)` of the
/// [`f_alpha_hankel`] integrand. Cancellation costs about `exp(peak)` in
/// absolute accuracy, so the oracle is only trusted while this is small.
pub fn hankel_log_peak(alpha: f64, z: f64) -> f64 {
    let c = -(PI * alpha).cos();
    if c <= 0.0 || z == 0.0 {
        return 0.0;
    }
    // d/ds: -(1/alpha) s^(1/alpha - 1) + z c = 0.
    let s = (alpha * z * c).powf(alpha / (1.0 - alpha));
    (-s.powf(1.0 / alpha) + z * c * s).max(0.0)
}

/// `erf(x)` by its Maclaurin series for `|x| <= 2` and the Laplace continued
/// fraction of `erfc` beyond.
pub fn erf(x: f64) -> f64 {
    if x < 0.0 {
        return -erf(-x);
    }
    if x <= 2.0 {
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        while term.abs() > 1e-18 * sum.abs() {
            n += 1.0;
            term *= -x * x / n;
            sum += term / (2.0 * n + 1.0);
        }
        2.0 / PI.sqrt() * sum
    } else {
        // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let mut cf = x;
        for k in (1..400).rev() {
            cf = x + (k as f64 / 2.0) / cf;
        }
        1.0 - (-x * x).exp() / (PI.sqrt() * cf)
    }
}

/// Standard normal CDF through [`erf`].
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / 2f64.sqrt()))
}

/// Textbook Black-Scholes call in market units.
pub fn black_scholes_call(spot: f64, strike: f64, r: f64, sigma: f64, t: f64) -> f64 {
    let sd = sigma * t.sqrt();
    let d1 = ((spot / strike).ln() + (r + 0.5 * sigma * sigma) * t) / sd;
    let d2 = d1 - sd;
    spot * normal_cdf(d1) - strike * (-r * t).exp() * normal_cdf(d2)
}

/// `E_alpha(-x)` from its power series in double-double-free form; fine for
/// `x <= 2`.
pub fn mittag_leffler_series_small(alpha: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    for n in 0..200 {
        let term = (-x).powi(n) / gamma_lanczos(1.0 + n as f64 * alpha);
        sum += term;
        if term.abs() < 1e-18 && n > 5 {
            break;
        }
    }
    sum
}

/// Lanczos gamma (g = 7, n = 9) for positive arguments.
pub fn gamma_lanczos(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

#[test]
fn oracles_self_check() {
    // F_{1/2}(z) = exp(-z^2/4)/sqrt(pi).
    for z in [0.0f64, 0.5, 1.7, 3.0] {
        let want = (-z * z / 4.0).exp() / PI.sqrt();
        assert!((f_alpha_hankel(0.5, z) - want).abs() < 1e-12, "z={z}");
    }
    assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
    assert!((erf(3.5) - 0.999_999_256_901_627_7).abs() < 1e-15);
    assert!((gamma_lanczos(0.5) - PI.sqrt()).abs() < 1e-14);
    // E_1(-x) = exp(-x).
    assert!((mittag_leffler_series_small(1.0, 1.5) - (-1.5f64).exp()).abs() < 1e-14);
}
