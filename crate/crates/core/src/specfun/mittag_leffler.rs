//! `E_alpha(-x) = sum_n (-x)^n / Gamma(1 + n alpha)` for `x >= 0`.
//!
//! Small arguments use the Taylor series; large ones use the spectral
//! representation of the completely monotone function,
//!
//! ```text
//! E_alpha(-x) = sin(alpha pi) / (alpha pi)
//!     * int_0^1 [exp(-(s x)^(1/alpha)) + exp(-(x / s)^(1/alpha))]
//!               / (s^2 + 2 s cos(alpha pi) + 1) ds
//! ```
//!
//! obtained from the spectral density after `r = s^(1/alpha)` and folding
//! `s -> 1/s` onto the unit interval. The integrand is positive and smooth.

use std::f64::consts::PI;

use super::gamma::recip_gamma;
use super::series::CompensatedSum;
use super::{AlphaIndex, EvalConfig, SeriesOutcome};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breakpoints, QuadConfig};

fn check_args(alpha: AlphaIndex, x: f64) -> Result<()> {
    let _ = alpha;
    if !(x >= 0.0) {
        return Err(Error::Domain {
            function: "mittag_leffler_neg",
            value: x,
            domain: "x >= 0",
        });
    }
    Ok(())
}

/// Taylor series for `E_alpha(-x)`, refusing when cancellation would exceed
/// `cfg.series_tol`.
pub fn mittag_leffler_series(alpha: AlphaIndex, x: f64, cfg: &EvalConfig) -> Result<SeriesOutcome> {
    check_args(alpha, x)?;
    cfg.validate()?;
    let a = alpha.get();
    let cap = cfg.term_cap();
    let mut sum = CompensatedSum::new();
    let mut max_term: f64 = 0.0;
    let mut prev = f64::INFINITY;
    let mut last = f64::INFINITY;
    for n in 0..cfg.max_terms {
        let mag = x.powi(n as i32) * recip_gamma(1.0 + n as f64 * a);
        max_term = max_term.max(mag);
        if max_term > cap {
            return Ok(SeriesOutcome::IllConditioned { max_term });
        }
        sum.add(if n % 2 == 0 { mag } else { -mag });
        if x == 0.0 || (n > 0 && mag <= prev && mag < 1e-3 * cfg.series_tol) {
            return Ok(SeriesOutcome::Converged {
                value: sum.value(),
                max_term,
                terms: n + 1,
            });
        }
        prev = mag;
        last = mag;
    }
    Err(Error::SeriesNonConvergence {
        what: "mittag-leffler series",
        terms: cfg.max_terms,
        last_term: last,
        tol: cfg.series_tol,
    })
}

/// `E_alpha(-x)` by quadrature of the spectral representation, `0 < alpha < 1`.
pub fn mittag_leffler_integral(alpha: AlphaIndex, x: f64) -> Result<f64> {
    check_args(alpha, x)?;
    let a = alpha.get();
    if alpha.is_one() {
        return Ok((-x).exp());
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let inv_a = 1.0 / a;
    // s^2 + 2 s cos(a pi) + 1 = (1 - s)^2 + 4 s cos^2(a pi / 2), exact near a = 1.
    let c2 = (0.5 * a * PI).cos().powi(2);
    let integrand = |s: f64| {
        let num = (-(s * x).powf(inv_a)).exp() + (-(x / s).powf(inv_a)).exp();
        num / ((1.0 - s) * (1.0 - s) + 4.0 * s * c2)
    };

    let mut points = vec![0.0, 1.0];
    for c in [1e-2, 0.1, 1.0, 10.0] {
        for s in [c / x, c * x] {
            if s > 0.0 && s < 1.0 {
                points.push(s);
            }
        }
    }
    // Lorentzian-like peak at s = 1 of width ~ 2 cos(a pi / 2) when a -> 1.
    let width = 2.0 * c2.sqrt();
    for m in [1.0, 10.0] {
        let s = 1.0 - m * width;
        if s > 0.0 && s < 1.0 {
            points.push(s);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();

    let cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 1e-13,
        max_subdivisions: 1000,
    };
    let est = integrate_with_breakpoints(integrand, &points, &cfg)?;
    Ok((a * PI).sin() / (a * PI) * est.value)
}

/// `E_alpha(-x)` with explicit regime controls.
pub fn mittag_leffler_neg_with(alpha: AlphaIndex, x: f64, cfg: &EvalConfig) -> Result<f64> {
    check_args(alpha, x)?;
    cfg.validate()?;
    if alpha.is_one() {
        return Ok((-x).exp());
    }
    if x <= cfg.regime_switch_z {
        if let SeriesOutcome::Converged { value, .. } = mittag_leffler_series(alpha, x, cfg)? {
            return Ok(value);
        }
    }
    mittag_leffler_integral(alpha, x)
}

/// `E_alpha(-x)` for `x >= 0`; a value in `(0, 1]`, completely monotone in `x`.
pub fn mittag_leffler_neg(alpha: AlphaIndex, x: f64) -> Result<f64> {
    mittag_leffler_neg_with(alpha, x, &EvalConfig::default())
}
