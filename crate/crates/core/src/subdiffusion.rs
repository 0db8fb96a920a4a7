//! The subordinated process `r_t = B_{S(t)}`.
//!
//! The parent Brownian motion has `Var B_tau = D tau / 2`, so its density is
//! `exp(-x^2 / (D tau)) / sqrt(pi D tau)` and
//!
//! ```text
//! p(t, x) = int_0^inf F_alpha(z) exp(-x^2 / (D t^alpha z)) / sqrt(pi D t^alpha z) dz.
//! ```

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::quadrature::{try_integrate_with_breakpoints, QuadConfig};
use crate::rng::{par_map, par_map_paths};
use crate::specfun::{f_alpha, gamma, truncation_point, AlphaIndex, EvalConfig};
use crate::subordinator::{sample_inverse_path, sample_inverse_subordinator, SamplePath, SimConfig};

/// Stability index and generalized diffusion coefficient `D` (length^2 / time^alpha).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: AlphaIndex,
    pub d: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, d: f64) -> Result<Self> {
        let p = Self {
            alpha: AlphaIndex::new(alpha)?,
            d,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(invalid("D", "must be finite and > 0"));
        }
        Ok(())
    }
}

/// Density values on a spatial grid at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    pub x_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub t: f64,
}

impl DensityGrid {
    /// Trapezoidal mass over the grid.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.x_grid, &self.values)
    }
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(invalid("t", "must be finite and > 0"));
    }
    Ok(())
}

fn gaussian(var_scale: f64, x: f64) -> f64 {
    // var_scale = D tau, the density of N(0, D tau / 2).
    (-x * x / var_scale).exp() / (PI * var_scale).sqrt()
}

/// Density of `r_t` at `x`.
///
/// Integrated in `w` with `z = w^2`, which removes the `1 / sqrt(z)` endpoint
/// singularity, and truncated where the `F_alpha` tail bound certifies an
/// omitted mass below `min(1e-12, quad.abs_tol / 10)`. Exact Gaussian for
/// `alpha = 1`.
pub fn subordinated_density(params: &ModelParams, t: f64, x: f64, quad: &QuadConfig) -> Result<f64> {
    subordinated_density_from(params, t, x, 0.0, quad)
}

/// Density at `x` of `B_{tau0 + S(t)}` where `B_{tau0}` is already spread, i.e.
/// the law reached from a Gaussian start of operational age `tau0 >= 0`.
pub fn subordinated_density_from(params: &ModelParams, t: f64, x: f64, tau0: f64, quad: &QuadConfig) -> Result<f64> {
    params.validate()?;
    check_time(t)?;
    quad.validate()?;
    if !(tau0 >= 0.0 && tau0.is_finite()) {
        return Err(invalid("tau0", "must be finite and >= 0"));
    }
    if !x.is_finite() {
        return Err(invalid("x", "must be finite"));
    }
    let alpha = params.alpha;
    if alpha.is_one() {
        return Ok(gaussian(params.d * (tau0 + t), x));
    }
    let c = params.d * t.powf(alpha.get());
    let s0 = tau0 / t.powf(alpha.get());
    let eps = 1e-12_f64.min(quad.abs_tol / 10.0);
    let w_max = truncation_point(alpha, 0.0, eps * (PI * c).sqrt()).sqrt();

    let mut points = vec![0.0, w_max];
    for level in [1.0, 10.0, 100.0] {
        let w2 = x * x / (c * level) - s0;
        if w2 > 0.0 && w2.sqrt() < w_max {
            points.push(w2.sqrt());
        }
    }
    for w in [1.0, 2.0] {
        if w < w_max {
            points.push(w);
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();

    let cfg = EvalConfig::default();
    let integrand = |w: f64| -> Result<f64> {
        let z = w * w;
        let jac = if s0 == 0.0 { 2.0 } else { 2.0 * w / (s0 + z).sqrt() };
        let kernel = if s0 + z == 0.0 {
            0.0
        } else {
            (-x * x / (c * (s0 + z))).exp()
        };
        Ok(f_alpha(alpha, z, &cfg)? * jac * kernel)
    };
    let est = try_integrate_with_breakpoints(integrand, &points, quad)?;
    Ok(est.value / (PI * c).sqrt())
}

/// Density on a grid of `x`, evaluated in parallel.
pub fn density_grid(params: &ModelParams, t: f64, x_grid: &[f64], quad: &QuadConfig) -> Result<DensityGrid> {
    density_grid_from(params, t, x_grid, 0.0, quad)
}

/// [`density_grid`] started from operational age `tau0`.
pub fn density_grid_from(
    params: &ModelParams,
    t: f64,
    x_grid: &[f64],
    tau0: f64,
    quad: &QuadConfig,
) -> Result<DensityGrid> {
    if x_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("x_grid", "must be strictly increasing"));
    }
    let values = par_map(x_grid.len(), |i| {
        subordinated_density_from(params, t, x_grid[i], tau0, quad)
    })?;
    Ok(DensityGrid {
        x_grid: x_grid.to_vec(),
        values,
        t,
    })
}

/// `(E r_t, E r_t^2) = (0, D t^alpha / (2 Gamma(1 + alpha)))`.
pub fn subordinated_moments(params: &ModelParams, t: f64) -> Result<(f64, f64)> {
    params.validate()?;
    check_time(t)?;
    let a = params.alpha.get();
    Ok((0.0, params.d * t.powf(a) / (2.0 * gamma(1.0 + a)?)))
}

/// One path of `r` on `t_grid`: an `S`-path, then Gaussian increments of
/// variance `(D / 2) dS`. Where `dS = 0` the position does not move.
pub fn sample_subordinated_path<R: Rng + ?Sized>(
    params: &ModelParams,
    t_grid: &[f64],
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<SamplePath> {
    params.validate()?;
    let s = sample_inverse_path(params.alpha, t_grid, cfg, rng)?;
    let mut values = Vec::with_capacity(s.len());
    let mut r = 0.0;
    let mut prev = 0.0;
    for &si in &s.values {
        let ds = si - prev;
        if ds > 0.0 {
            let z: f64 = rng.sample(StandardNormal);
            r += (0.5 * params.d * ds).sqrt() * z;
        }
        values.push(r);
        prev = si;
    }
    SamplePath::new(s.grid, values)
}

/// `cfg.n_paths` paths of `r` on a shared grid.
pub fn sample_subordinated_paths(params: &ModelParams, t_grid: &[f64], cfg: &SimConfig) -> Result<Vec<SamplePath>> {
    cfg.validate()?;
    par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
        sample_subordinated_path(params, t_grid, cfg, rng)
    })
}

/// `cfg.n_paths` draws of `r_t` at a single time, `sqrt(D S(t) / 2) Z`.
pub fn sample_subordinated_terminal(params: &ModelParams, t: f64, cfg: &SimConfig) -> Result<Vec<f64>> {
    params.validate()?;
    cfg.validate()?;
    par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
        let s = sample_inverse_subordinator(params.alpha, t, cfg, rng)?;
        let z: f64 = rng.sample(StandardNormal);
        Ok((0.5 * params.d * s).sqrt() * z)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::path_rng;
    use crate::stats::MeanEstimate;

    fn quad() -> QuadConfig {
        QuadConfig::new(1e-13, 1e-11, 2000).unwrap()
    }

    #[test]
    fn gaussian_boundary_case() {
        let p = ModelParams::new(1.0, 1.0).unwrap();
        let v = subordinated_density(&p, 1.0, 0.0, &quad()).unwrap();
        assert!((v - 1.0 / PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn half_alpha_at_origin() {
        // p(1, 0) = (2 / pi) int_0^inf exp(-w^4 / 4) dw = sqrt(2) Gamma(1/4) / (2 pi).
        let p = ModelParams::new(0.5, 1.0).unwrap();
        let v = subordinated_density(&p, 1.0, 0.0, &quad()).unwrap();
        let expected = 2f64.sqrt() * gamma(0.25).unwrap() / (2.0 * PI);
        assert!((v - expected).abs() < 1e-11, "{v} vs {expected}");
    }

    #[test]
    fn even_in_x() {
        let p = ModelParams::new(0.7, 1.3).unwrap();
        for x in [0.1, 0.8, 2.5] {
            let a = subordinated_density(&p, 0.9, x, &quad()).unwrap();
            let b = subordinated_density(&p, 0.9, -x, &quad()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn moments_closed_form() {
        let (m, v) = subordinated_moments(&ModelParams::new(1.0, 2.0).unwrap(), 3.0).unwrap();
        assert_eq!((m, v), (0.0, 3.0));
        let p = ModelParams::new(0.5, 1.0).unwrap();
        let (_, v1) = subordinated_moments(&p, 1.0).unwrap();
        let (_, v4) = subordinated_moments(&p, 4.0).unwrap();
        assert!((v1 - 0.564_189_583_547_756_3).abs() < 1e-14);
        assert!((v4 / v1 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn offset_start_is_heavier_spread() {
        let p = ModelParams::new(0.6, 1.0).unwrap();
        let a = subordinated_density_from(&p, 1.0, 0.0, 0.0, &quad()).unwrap();
        let b = subordinated_density_from(&p, 1.0, 0.0, 0.5, &quad()).unwrap();
        assert!(b < a);
    }

    #[test]
    fn paths_freeze_when_clock_stops() {
        let p = ModelParams::new(0.6, 1.0).unwrap();
        let grid = [0.0, 0.5, 0.5, 1.0];
        let mut rng = path_rng(9, 0);
        let path = sample_subordinated_path(&p, &grid, &SimConfig::default(), &mut rng).unwrap();
        assert_eq!(path.values[0], 0.0);
        assert_eq!(path.values[1], path.values[2]);
    }

    #[test]
    fn terminal_variance_matches_moment() {
        let p = ModelParams::new(0.6, 1.0).unwrap();
        let cfg = SimConfig {
            n_paths: 200_000,
            seed: 31,
            ..SimConfig::default()
        };
        let r = sample_subordinated_terminal(&p, 1.0, &cfg).unwrap();
        let sq: Vec<f64> = r.iter().map(|x| x * x).collect();
        let (_, m2) = subordinated_moments(&p, 1.0).unwrap();
        let e = MeanEstimate::from_samples(&sq);
        assert!(e.z_score(m2) < 3.0, "{e:?} vs {m2}");
        assert!(MeanEstimate::from_samples(&r).z_score(0.0) < 3.0);
    }
}
