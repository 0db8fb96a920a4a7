//! European calls under the Black-Scholes model and under its subordinated
//! version, where the dimensionless maturity is replaced by the random clock
//! `S(t)`.
//!
//! In dimensionless form the classical price is
//! `C(tau, x) = x Phi(d+) - K exp(-beta tau) Phi(d-)` with
//! `d+- = (ln(x / K) + tau (beta +- 1)) / sqrt(2 tau)`, `beta = 2 r / sigma^2` and
//! `tau = sigma^2 t / 2`. The subordinated price averages `C` over the law of
//! `S(t)`: `int_0^inf F_alpha(u) C(t^alpha u, x) du`.

use crate::error::{invalid, Result};
use crate::quadrature::{try_integrate_with_breakpoints, QuadConfig};
use crate::specfun::{f_alpha, mittag_leffler_neg, probability_integral, truncation_point, AlphaIndex, EvalConfig};
use crate::stats::MeanEstimate;
use crate::subordinator::{sample_inverse_batch, SimConfig};

/// Spot, strike and `beta = 2 r / sigma^2` of a European option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contract {
    pub spot: f64,
    pub strike: f64,
    pub beta: f64,
}

impl Contract {
    pub fn new(spot: f64, strike: f64, beta: f64) -> Result<Self> {
        let c = Self { spot, strike, beta };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spot > 0.0 && self.spot.is_finite()) {
            return Err(invalid("spot", "must be finite and > 0"));
        }
        if !(self.strike > 0.0 && self.strike.is_finite()) {
            return Err(invalid("strike", "must be finite and > 0"));
        }
        if !self.beta.is_finite() {
            return Err(invalid("beta", "must be finite"));
        }
        Ok(())
    }

    /// The contract at dimensionless maturity `tau`.
    pub fn at(self, tau: f64) -> ContractParams {
        ContractParams {
            spot: self.spot,
            strike: self.strike,
            beta: self.beta,
            tau,
        }
    }
}

/// A contract together with its dimensionless maturity `tau = sigma^2 t / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractParams {
    pub spot: f64,
    pub strike: f64,
    pub beta: f64,
    pub tau: f64,
}

impl ContractParams {
    pub fn contract(&self) -> Contract {
        Contract {
            spot: self.spot,
            strike: self.strike,
            beta: self.beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.contract().validate()?;
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(invalid("tau", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// `C(tau, x)` without validation; `tau = 0` gives the intrinsic value.
fn call_value(spot: f64, strike: f64, beta: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return (spot - strike).max(0.0);
    }
    let s = (2.0 * tau).sqrt();
    let m = (spot / strike).ln();
    let d_plus = (m + tau * (beta + 1.0)) / s;
    let d_minus = (m + tau * (beta - 1.0)) / s;
    let v = spot * probability_integral(d_plus) - strike * (-beta * tau).exp() * probability_integral(d_minus);
    v.clamp(0.0, spot)
}

/// Classical call price `C(tau, x)` in dimensionless units.
pub fn bs_price_classical(c: &ContractParams) -> Result<f64> {
    c.validate()?;
    Ok(call_value(c.spot, c.strike, c.beta, c.tau))
}

/// Classical put price by parity, `P = C - x + K exp(-beta tau)`.
pub fn bs_put_classical(c: &ContractParams) -> Result<f64> {
    let call = bs_price_classical(c)?;
    Ok((call - c.spot + c.strike * (-c.beta * c.tau).exp()).max(0.0))
}

/// Converts market units to the dimensionless contract:
/// `beta = 2 r / sigma^2`, `tau = sigma^2 t_real / 2`.
pub fn map_real_params(spot: f64, strike: f64, r: f64, sigma: f64, t_real: f64) -> Result<ContractParams> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", "must be finite and > 0"));
    }
    if !r.is_finite() {
        return Err(invalid("rate", "must be finite"));
    }
    let c = ContractParams {
        spot,
        strike,
        beta: 2.0 * r / (sigma * sigma),
        tau: 0.5 * sigma * sigma * t_real,
    };
    c.validate()?;
    Ok(c)
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", "must be finite and > 0"));
    }
    Ok(())
}

/// Subordinated call price by quadrature over `F_alpha`.
///
/// Integrated in `w` with `u = w^2` so the `sqrt(tau)` behaviour of `C` near
/// `tau = 0` becomes smooth, and truncated where the `F_alpha` tail bound times
/// `C <= x` is below `quad.abs_tol / 10`. Equals the classical price at
/// `tau = t` when `alpha = 1`.
pub fn subordinated_price_quadrature(alpha: AlphaIndex, t: f64, c: &Contract, quad: &QuadConfig) -> Result<f64> {
    c.validate()?;
    check_time(t)?;
    quad.validate()?;
    if alpha.is_one() {
        return Ok(call_value(c.spot, c.strike, c.beta, t));
    }
    let scale = t.powf(alpha.get());
    let u_max = truncation_point(alpha, 0.0, quad.abs_tol / (10.0 * c.spot));
    let w_max = u_max.sqrt();
    let mut points = vec![0.0, w_max];
    if w_max > 1.0 {
        points.insert(1, 1.0);
    }
    let cfg = EvalConfig::default();
    let integrand = |w: f64| -> Result<f64> {
        let u = w * w;
        Ok(2.0 * w * f_alpha(alpha, u, &cfg)? * call_value(c.spot, c.strike, c.beta, scale * u))
    };
    let est = try_integrate_with_breakpoints(integrand, &points, quad)?;
    Ok(est.value.clamp(0.0, c.spot))
}

/// Subordinated put by parity: `P = C - x + K E_alpha(-beta t^alpha)`.
pub fn subordinated_put_quadrature(alpha: AlphaIndex, t: f64, c: &Contract, quad: &QuadConfig) -> Result<f64> {
    if c.beta < 0.0 {
        return Err(invalid("beta", "put parity needs beta >= 0"));
    }
    let call = subordinated_price_quadrature(alpha, t, c, quad)?;
    let discount = mittag_leffler_neg(alpha, c.beta * t.powf(alpha.get()))?;
    Ok((call - c.spot + c.strike * discount).max(0.0))
}

/// Monte Carlo estimate of the subordinated call from given draws of `S(t)`.
pub fn price_from_clock_samples(c: &Contract, clock: &[f64]) -> MeanEstimate {
    let payoffs: Vec<f64> = clock.iter().map(|&s| call_value(c.spot, c.strike, c.beta, s)).collect();
    MeanEstimate::from_samples(&payoffs)
}

/// Monte Carlo subordinated call: `cfg.n_paths` draws of `S(t)`, each priced
/// with the classical formula at `tau = S(t)`.
pub fn subordinated_price_mc(alpha: AlphaIndex, t: f64, c: &Contract, cfg: &SimConfig) -> Result<MeanEstimate> {
    c.validate()?;
    check_time(t)?;
    let clock = sample_inverse_batch(alpha, t, cfg)?;
    Ok(price_from_clock_samples(c, &clock))
}
