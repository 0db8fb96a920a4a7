//! The M-Wright function `F_alpha(z)`, density of the inverse stable
//! subordinator at unit time.
//!
//! Two evaluation routes:
//!
//! * the entire series `sum_k (-z)^k / (k! Gamma(1 - alpha - k alpha))`, used
//!   while its largest term is small enough that cancellation stays below
//!   [`EvalConfig::series_tol`];
//! * Kanter's integral representation
//!   `F(z) = z^(p-1) / (pi (1 - alpha)) * int_0^pi A(phi) exp(-A(phi) z^p) dphi`
//!   with `p = 1 / (1 - alpha)`, whose integrand is positive, so it keeps full
//!   relative accuracy out in the stretched-exponential tail.
//!
//! `A` is Kanter's function (see [`kanter_function`]); it increases from
//! `A(0+) = (1 - alpha) alpha^(alpha / (1 - alpha))`, the rate constant of the
//! tail asymptote.

use std::f64::consts::PI;

use super::gamma::{gamma, recip_gamma, sin_pi};
use super::series::CompensatedSum;
use super::{AlphaIndex, EvalConfig};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breakpoints, QuadConfig};

/// Kanter's function
/// `A(phi) = sin(alpha phi)^(alpha / (1 - alpha)) sin((1 - alpha) phi) / sin(phi)^(1 / (1 - alpha))`
/// on `0 < phi < pi`, for `0 < alpha < 1`.
pub fn kanter_function(alpha: f64, phi: f64) -> f64 {
    let p = 1.0 / (1.0 - alpha);
    let sin_phi = if phi > 0.5 * PI { (PI - phi).sin() } else { phi.sin() };
    let ratio = (alpha * phi).sin().powf(alpha) / sin_phi;
    ((1.0 - alpha) * phi).sin() * ratio.powf(p)
}

/// Leading stretched-exponential behaviour
/// `F(z) ~ amplitude * z^power * exp(-rate * z^stretch)` as `z -> inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticForm {
    pub amplitude: f64,
    pub power: f64,
    pub rate: f64,
    pub stretch: f64,
}

impl AsymptoticForm {
    pub fn new(alpha: f64) -> Self {
        let one_m = 1.0 - alpha;
        Self {
            amplitude: alpha.powf((2.0 * alpha - 1.0) / (2.0 * one_m)) / (2.0 * PI * one_m).sqrt(),
            power: (alpha - 0.5) / one_m,
            rate: one_m * alpha.powf(alpha / one_m),
            stretch: 1.0 / one_m,
        }
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.amplitude * z.powf(self.power) * (-self.rate * z.powf(self.stretch)).exp()
    }
}

/// Leading-order large-`z` approximation of `F_alpha(z)`.
pub fn f_alpha_asymptotic(alpha: AlphaIndex, z: f64) -> Result<f64> {
    check_density_args("f_alpha_asymptotic", alpha, z)?;
    Ok(AsymptoticForm::new(alpha.get()).eval(z))
}

/// Outcome of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesOutcome {
    Converged {
        value: f64,
        max_term: f64,
        terms: usize,
    },
    /// The largest term exceeded the cap; the partial sum is not trustworthy.
    IllConditioned {
        max_term: f64,
    },
}

/// `sum_k (-z)^k / (k! Gamma(mu - alpha k))`.
fn wright_series(alpha: f64, mu: f64, z: f64, cfg: &EvalConfig) -> Result<SeriesOutcome> {
    let cap = cfg.term_cap();
    let mut sum = CompensatedSum::new();
    let mut power = 1.0; // z^k / k!
    let mut max_term: f64 = 0.0;
    let mut prev_env = f64::INFINITY;
    let mut last_env = f64::INFINITY;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        if k > 0 {
            power *= z / kf;
        }
        let x = mu - alpha * kf;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let (term, env) = if x >= 0.5 {
            let t = power * recip_gamma(x);
            (sign * t, t.abs())
        } else {
            // |1/Gamma(x)| <= Gamma(1 - x) / pi; the envelope drives convergence
            // because sin(pi x) can vanish at individual terms.
            let g = gamma(1.0 - x).unwrap_or(f64::INFINITY);
            let env = if g.is_finite() && power > 0.0 {
                power * g / PI
            } else if z > 0.0 {
                (kf * z.ln() - super::ln_gamma(kf + 1.0) + super::ln_gamma(1.0 - x) - PI.ln()).exp()
            } else {
                0.0
            };
            (sign * env * sin_pi(x), env)
        };
        max_term = max_term.max(env);
        if max_term > cap {
            return Ok(SeriesOutcome::IllConditioned { max_term });
        }
        sum.add(term);
        if k > 0 && env <= prev_env && env < 1e-3 * cfg.series_tol {
            return Ok(SeriesOutcome::Converged {
                value: sum.value(),
                max_term,
                terms: k + 1,
            });
        }
        prev_env = env;
        last_env = env;
        if z == 0.0 {
            return Ok(SeriesOutcome::Converged {
                value: sum.value(),
                max_term,
                terms: 1,
            });
        }
    }
    Err(Error::SeriesNonConvergence {
        what: "wright series",
        terms: cfg.max_terms,
        last_term: last_env,
        tol: cfg.series_tol,
    })
}

fn check_density_args(function: &'static str, alpha: AlphaIndex, z: f64) -> Result<()> {
    if alpha.is_one() {
        return Err(Error::Domain {
            function,
            value: 1.0,
            domain: "alpha < 1 (alpha = 1 is a point mass at z = 1)",
        });
    }
    if !(z >= 0.0) || z.is_infinite() {
        return Err(Error::Domain {
            function,
            value: z,
            domain: "z >= 0",
        });
    }
    Ok(())
}

/// `F_alpha(z)` from the power series alone.
pub fn f_alpha_series(alpha: AlphaIndex, z: f64, cfg: &EvalConfig) -> Result<SeriesOutcome> {
    check_density_args("f_alpha_series", alpha, z)?;
    cfg.validate()?;
    let a = alpha.get();
    wright_series(a, 1.0 - a, z, cfg)
}

/// Solves `A(phi) = target` for `phi` in `(0, pi)`; `A` is increasing.
fn kanter_level(alpha: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, PI);
    for _ in 0..48 {
        let mid = 0.5 * (lo + hi);
        if kanter_function(alpha, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `int_0^pi A^m exp(-(A - A(0)) w) dphi` for `m = 1, 2`, split at the levels
/// where the exponent changes scale so narrow peaks are never missed.
fn kanter_moments(alpha: f64, w: f64, second: bool) -> Result<(f64, f64)> {
    let a0 = AsymptoticForm::new(alpha).rate;
    let g0 = a0 * w;
    let mut levels: Vec<f64> = [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
        .iter()
        .map(|d| g0 + d)
        .chain(
            [1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
                .into_iter()
                .filter(|&l| l > g0),
        )
        .collect();
    let cut = g0.max(1.0) + 50.0;
    levels.retain(|&l| l < cut);
    levels.push(cut);
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut points = Vec::with_capacity(levels.len() + 1);
    points.push(0.0);
    for l in levels {
        let phi = kanter_level(alpha, l / w);
        if phi > *points.last().unwrap() {
            points.push(phi);
        }
    }
    // A(phi) - A(0) loses about eps * g0 of relative accuracy in the exponent.
    let cfg = QuadConfig {
        abs_tol: 1e-300,
        rel_tol: 5e-14_f64.max(20.0 * f64::EPSILON * g0),
        max_subdivisions: 600,
    };
    let weight = |phi: f64| {
        let a = kanter_function(alpha, phi);
        let e = (-(a - a0) * w).exp();
        (a, if e > 0.0 { e } else { 0.0 })
    };
    let m1 = integrate_with_breakpoints(
        |phi| {
            let (a, e) = weight(phi);
            a * e
        },
        &points,
        &cfg,
    )?;
    if !second {
        return Ok((m1.value, 0.0));
    }
    let m2 = integrate_with_breakpoints(
        |phi| {
            let (a, e) = weight(phi);
            if e == 0.0 {
                0.0
            } else {
                a * a * e
            }
        },
        &points,
        &cfg,
    )?;
    Ok((m1.value, m2.value))
}

// F <= rate p z^(p-1) exp(-rate w) once rate w >= 1.
fn underflows(rate: f64, p: f64, z: f64, w: f64, extra_log: f64) -> bool {
    rate * w >= 1.0 && (rate * p).ln() + (p - 1.0) * z.ln() - rate * w + extra_log < -746.0
}

/// `F_alpha(z)` from Kanter's integral representation (valid for `z > 0`).
pub fn f_alpha_integral(alpha: AlphaIndex, z: f64) -> Result<f64> {
    check_density_args("f_alpha_integral", alpha, z)?;
    let a = alpha.get();
    if z == 0.0 {
        return Ok(recip_gamma(1.0 - a));
    }
    let p = 1.0 / (1.0 - a);
    let w = z.powf(p);
    let rate = AsymptoticForm::new(a).rate;
    if underflows(rate, p, z, w, 0.0) {
        return Ok(0.0);
    }
    let (m1, _) = kanter_moments(a, w, false)?;
    let log_f = (p - 1.0) * z.ln() - (PI * (1.0 - a)).ln() - rate * w + m1.ln();
    Ok(log_f.exp())
}

fn use_series(z: f64, cfg: &EvalConfig) -> bool {
    z <= cfg.regime_switch_z
}

/// The M-Wright density `F_alpha(z)`, `z >= 0`, `0 < alpha < 1`.
///
/// The series is used up to `cfg.regime_switch_z` while it stays well
/// conditioned; otherwise Kanter's integral representation is integrated.
pub fn f_alpha(alpha: AlphaIndex, z: f64, cfg: &EvalConfig) -> Result<f64> {
    check_density_args("f_alpha", alpha, z)?;
    cfg.validate()?;
    if use_series(z, cfg) {
        if let SeriesOutcome::Converged { value, .. } = f_alpha_series(alpha, z, cfg)? {
            return Ok(value.max(0.0));
        }
    }
    f_alpha_integral(alpha, z)
}

/// `d F_alpha / dz`.
pub fn f_alpha_derivative(alpha: AlphaIndex, z: f64, cfg: &EvalConfig) -> Result<f64> {
    check_density_args("f_alpha_derivative", alpha, z)?;
    cfg.validate()?;
    let a = alpha.get();
    if use_series(z, cfg) {
        if let SeriesOutcome::Converged { value, .. } = wright_series(a, 1.0 - 2.0 * a, z, cfg)? {
            return Ok(-value);
        }
    }
    if z == 0.0 {
        return Ok(-recip_gamma(1.0 - 2.0 * a));
    }
    let p = 1.0 / (1.0 - a);
    let w = z.powf(p);
    let rate = AsymptoticForm::new(a).rate;
    // |F'| is bounded by the density bound times (p - 1) / z + p rate z^(p-1).
    let extra = ((p - 1.0) / z + p * rate * z.powf(p - 1.0)).ln();
    if underflows(rate, p, z, w, extra) {
        return Ok(0.0);
    }
    let (m1, m2) = kanter_moments(a, w, true)?;
    let scale = (-rate * w).exp() / (PI * (1.0 - a));
    Ok(scale * ((p - 1.0) * z.powf(p - 2.0) * m1 - p * z.powf(2.0 * p - 2.0) * m2))
}

/// Location of the interior maximum of `F_alpha`.
///
/// `None` for `alpha <= 1/2`, where `F_alpha` decreases from `z = 0`.
/// Otherwise the sign change of `F'_alpha` is bracketed on a coarse scan and
/// bisected to `1e-12`.
pub fn f_alpha_mode(alpha: AlphaIndex) -> Result<Option<f64>> {
    let a = alpha.get();
    if alpha.is_one() {
        return Err(Error::Domain {
            function: "f_alpha_mode",
            value: a,
            domain: "alpha < 1",
        });
    }
    if a <= 0.5 {
        return Ok(None);
    }
    let cfg = EvalConfig::default();
    let d = |z: f64| f_alpha_derivative(alpha, z, &cfg);
    let step = 0.05;
    let mut lo = 0.0;
    let mut hi = step;
    while d(hi)? > 0.0 {
        lo = hi;
        hi += step;
        if hi > 20.0 {
            return Err(Error::Domain {
                function: "f_alpha_mode",
                value: a,
                domain: "mode bracket not found on [0, 20]",
            });
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if d(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Density of `S(t)` at `x`: `t^(-alpha) F_alpha(x / t^alpha)`.
pub fn inverse_subordinator_density(alpha: AlphaIndex, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || t.is_infinite() {
        return Err(Error::Domain {
            function: "inverse_subordinator_density",
            value: t,
            domain: "t > 0",
        });
    }
    check_density_args("inverse_subordinator_density", alpha, x)?;
    let scale = t.powf(alpha.get());
    Ok(f_alpha(alpha, x / scale, &EvalConfig::default())? / scale)
}

/// Upper bound on `int_{z0}^inf z^moment F_alpha(z) dz`, or `+inf` when `z0`
/// is too small for the bound to apply.
///
/// Uses `F_alpha(z) <= B p z^(p-1) exp(-B z^p)` (valid once `B z^p >= 1`,
/// since `A >= B`), which integrates to an upper incomplete Gamma function.
pub fn tail_mass_bound(alpha: AlphaIndex, z0: f64, moment: f64) -> f64 {
    if alpha.is_one() {
        return if z0 > 1.0 { 0.0 } else { f64::INFINITY };
    }
    let form = AsymptoticForm::new(alpha.get());
    let p = form.stretch;
    let b = form.rate;
    let y = b * z0.powf(p);
    let s = 1.0 + moment / p;
    if !(y >= 1.0) || s <= 0.0 {
        return f64::INFINITY;
    }
    let upper_gamma = if s <= 1.0 {
        y.powf(s - 1.0) * (-y).exp()
    } else if y >= 2.0 * (s - 1.0) {
        y.powf(s - 1.0) * (-y).exp() / (1.0 - (s - 1.0) / y)
    } else {
        return f64::INFINITY;
    };
    b.powf(-moment / p) * upper_gamma
}

/// A point `Z` with `tail_mass_bound(alpha, Z, moment) <= eps`.
pub fn truncation_point(alpha: AlphaIndex, moment: f64, eps: f64) -> f64 {
    if alpha.is_one() {
        return 1.0;
    }
    let eps = if eps > 0.0 { eps } else { f64::MIN_POSITIVE };
    let mut z = 1.0;
    while tail_mass_bound(alpha, z, moment) > eps {
        z *= 1.1;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn al(a: f64) -> AlphaIndex {
        AlphaIndex::new(a).unwrap()
    }

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn half_closed_form() {
        let cfg = EvalConfig::default();
        assert!((f_alpha(al(0.5), 0.0, &cfg).unwrap() - 1.0 / SQRT_PI).abs() < 1e-15);
        let v = f_alpha(al(0.5), 2.0, &cfg).unwrap();
        assert!((v - (-1.0f64).exp() / SQRT_PI).abs() < 1e-14);
        assert!((v - 0.207_553_748_710_297_35).abs() < 1e-14);
    }

    #[test]
    fn kanter_function_increasing_from_tail_rate() {
        for a in [0.1, 0.3, 0.5, 0.7, 0.9, 0.97] {
            let b = AsymptoticForm::new(a).rate;
            assert!((kanter_function(a, 1e-7) - b).abs() < 1e-9 * b.max(1.0), "alpha {a}");
            let mut prev = 0.0;
            for i in 1..2000 {
                let v = kanter_function(a, PI * i as f64 / 2000.0);
                assert!(v >= prev, "alpha {a} i {i}");
                prev = v;
            }
        }
    }

    #[test]
    fn integral_matches_high_precision_references() {
        // 40-digit references from the series in extended precision.
        let cases = [
            (0.75, 1.5, 0.548_737_862_226_456_333_7),
            (0.75, 0.2, 0.337_257_988_480_038_161_9),
            (0.9, 1.0, 1.008_146_745_621_271_204_4),
            (0.3, 4.0, 0.021_334_527_126_339_507_04),
            (0.3, 5.0, 0.006_466_539_214_519_133_678),
            (0.3, 20.0, 2.242_015_544_892_763_221e-14),
        ];
        for (a, z, expected) in cases {
            let v = f_alpha_integral(al(a), z).unwrap();
            assert!(((v - expected) / expected).abs() < 1e-11, "alpha {a} z {z}: {v}");
            let v = f_alpha(al(a), z, &EvalConfig::default()).unwrap();
            assert!(((v - expected) / expected).abs() < 1e-11, "alpha {a} z {z}: {v}");
        }
    }

    #[test]
    fn series_and_integral_agree_where_both_apply() {
        let cfg = EvalConfig::default();
        for a in [0.2, 0.3, 0.5, 0.6, 0.8] {
            for z in [0.05, 0.4, 1.0, 1.7] {
                if let SeriesOutcome::Converged { value, .. } = f_alpha_series(al(a), z, &cfg).unwrap() {
                    let i = f_alpha_integral(al(a), z).unwrap();
                    assert!((value - i).abs() < cfg.series_tol, "alpha {a} z {z}: {value} vs {i}");
                }
            }
        }
    }

    #[test]
    fn regimes_agree_where_series_is_trusted() {
        let cfg = EvalConfig::default();
        let mut compared = 0;
        for a in [0.1, 0.2, 0.25, 0.4, 0.6, 0.75, 0.9] {
            for z in [0.25, 0.5, 1.0, 2.0, 3.0, cfg.regime_switch_z] {
                if let SeriesOutcome::Converged { value, .. } = f_alpha_series(al(a), z, &cfg).unwrap() {
                    let i = f_alpha_integral(al(a), z).unwrap();
                    assert!((value - i).abs() < cfg.series_tol, "alpha {a} z {z}: {value} vs {i}");
                    compared += 1;
                }
            }
        }
        assert!(compared >= 20, "only {compared} conditioned cases");
    }

    #[test]
    fn ill_conditioned_series_is_detected() {
        let out = f_alpha_series(al(0.9), 3.0, &EvalConfig::default()).unwrap();
        assert!(matches!(out, SeriesOutcome::IllConditioned { .. }));
    }

    #[test]
    fn max_terms_reports_non_convergence() {
        let cfg = EvalConfig {
            max_terms: 3,
            ..EvalConfig::default()
        };
        let err = f_alpha(al(0.4), 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::SeriesNonConvergence { terms: 3, .. }));
    }

    #[test]
    fn asymptotic_constants_against_integral() {
        // The leading-order form becomes exact as z grows.
        for (a, z, tol) in [
            (0.3, 50.0, 2e-3),
            (0.5, 8.0, 1e-12),
            (0.75, 5.0, 1e-3),
            (0.9, 2.0, 2e-3),
        ] {
            let exact = f_alpha_integral(al(a), z).unwrap();
            let approx = f_alpha_asymptotic(al(a), z).unwrap();
            assert!(exact > 0.0);
            assert!(
                (approx / exact - 1.0).abs() < tol,
                "alpha {a} z {z}: {}",
                approx / exact
            );
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let cfg = EvalConfig::default();
        assert!(f_alpha(al(1.0), 1.0, &cfg).is_err());
        assert!(f_alpha(al(0.5), -0.1, &cfg).is_err());
        assert!(inverse_subordinator_density(al(0.5), 0.0, 1.0).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let cfg = EvalConfig::default();
        for (a, z) in [(0.3, 0.7), (0.75, 0.4), (0.75, 3.0), (0.9, 1.2), (0.6, 6.0)] {
            let h = 1e-5;
            let fd = (f_alpha(al(a), z + h, &cfg).unwrap() - f_alpha(al(a), z - h, &cfg).unwrap()) / (2.0 * h);
            let d = f_alpha_derivative(al(a), z, &cfg).unwrap();
            assert!((fd - d).abs() < 1e-7 * d.abs().max(1.0), "alpha {a} z {z}: {fd} vs {d}");
        }
    }

    #[test]
    fn inverse_density_scaling() {
        let v1 = inverse_subordinator_density(al(0.5), 1.0, 0.0).unwrap();
        let v4 = inverse_subordinator_density(al(0.5), 4.0, 0.0).unwrap();
        assert!((v1 - 1.0 / SQRT_PI).abs() < 1e-15);
        assert!((v4 - 0.5 / SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn tail_bound_dominates_tail_mass() {
        for a in [0.3, 0.7] {
            let z0 = truncation_point(al(a), 0.0, 1e-6);
            let bound = tail_mass_bound(al(a), z0, 0.0);
            assert!(bound <= 1e-6);
            let tail = crate::quadrature::integrate(
                |z| f_alpha(al(a), z, &EvalConfig::default()).unwrap(),
                z0,
                z0 + 50.0,
                &QuadConfig::new(1e-20, 1e-8, 2000).unwrap(),
            )
            .unwrap()
            .value;
            assert!(tail <= bound, "alpha {a}: tail {tail} bound {bound}");
        }
        assert_eq!(tail_mass_bound(al(0.5), 1e-3, 0.0), f64::INFINITY);
    }
}
