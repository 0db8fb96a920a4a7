//! The stable subordinator `T(tau)`, its inverse `S(t) = inf{x : T(x) > t}`
//! and the heavy-tailed renewal count `N_t`.
//!
//! `T` is normalized by `E exp(-u T(tau)) = exp(-tau u^alpha)`. Increments come
//! from Kanter's representation `T(1) = (A(U) / E)^((1 - alpha) / alpha)` with
//! `U` uniform on `(0, pi)` and `E` standard exponential.
//!
//! `S(t)` is found by walking `T` on a grid of operational-time steps `h`.
//! Inside the step `[tau_k, tau_k + h]` where `T` jumps from `y_k <= t` to
//! `y_k + delta > t`, the crossing time is placed at
//! `tau_k + h ((t - y_k) / delta)^alpha`. Since the remaining clock restarts
//! afresh at `tau_k`, and a single step satisfies `S(s) = (s / T(1))^alpha` in
//! law, this makes every one-point draw of `S(t)` exact for any `h`; `h` only
//! sets how finely joint path features are resolved.

use std::io::Write;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::output::fmt_f64;
use crate::rng::{open01, par_map_paths};
use crate::specfun::{gamma, kanter_function, AlphaIndex};

/// Operational-time steps a single `T`-path may take before giving up.
pub const STEP_CAP: usize = 10_000_000;

/// Reproducibility and discretization settings for Monte Carlo runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_paths: usize,
    /// Operational-time step of the `T`-path walk.
    pub dtau: f64,
    /// Largest physical time any sampler may be asked for.
    pub t_max: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n_paths: 100_000,
            dtau: 0.05,
            t_max: 100.0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(invalid("n_paths", "must be >= 1"));
        }
        if !(self.dtau > 0.0 && self.dtau.is_finite()) {
            return Err(invalid("dtau", "must be finite and > 0"));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return Err(invalid("t_max", "must be finite and > 0"));
        }
        Ok(())
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.t_max) {
            return Err(invalid("t", format!("{t} is outside [0, t_max = {}]", self.t_max)));
        }
        Ok(())
    }
}

/// Process values on a nondecreasing parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.is_empty() || grid.len() != values.len() {
            return Err(invalid("values", "grid and values need equal, nonzero length"));
        }
        check_grid(&grid)?;
        Ok(Self { grid, values })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn last_value(&self) -> f64 {
        *self.values.last().expect("paths are nonempty")
    }
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(invalid("grid", "must be nonempty"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(invalid("grid", "must be finite"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("grid", "must be nondecreasing"));
    }
    Ok(())
}

fn check_step(dtau: f64) -> Result<()> {
    if !(dtau > 0.0 && dtau.is_finite()) {
        return Err(invalid("dtau", "must be finite and > 0"));
    }
    Ok(())
}

/// `ln T(1)` for one Kanter draw.
fn ln_unit_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    let phi = std::f64::consts::PI * open01(rng);
    let e = -open01(rng).ln();
    (1.0 - alpha) / alpha * (kanter_function(alpha, phi).ln() - e.ln())
}

/// `ln` of one increment of `T` over operational time `dtau`.
fn ln_increment<R: Rng + ?Sized>(alpha: f64, dtau: f64, rng: &mut R) -> f64 {
    dtau.ln() / alpha + ln_unit_stable(alpha, rng)
}

/// One increment of `T` over operational time `dtau`, with
/// `E exp(-u inc) = exp(-dtau u^alpha)`. Exactly `dtau` when `alpha = 1`.
pub fn sample_stable_increment<R: Rng + ?Sized>(alpha: AlphaIndex, dtau: f64, rng: &mut R) -> Result<f64> {
    check_step(dtau)?;
    if alpha.is_one() {
        return Ok(dtau);
    }
    Ok(ln_increment(alpha.get(), dtau, rng).exp())
}

/// Crossing time inside a step from `(tau_k, y_k)` of length `h` whose jump is
/// `exp(ln_delta)`, for a level `t` with `y_k <= t < y_k + delta`.
fn crossing_time(alpha: f64, tau_k: f64, h: f64, y_k: f64, ln_delta: f64, t: f64) -> f64 {
    let gap = t - y_k;
    if gap <= 0.0 {
        return tau_k;
    }
    tau_k + h * (alpha * (gap.ln() - ln_delta)).exp().min(1.0)
}

/// One draw of `S(t)`; exactly `t` when `alpha = 1`.
pub fn sample_inverse_subordinator<R: Rng + ?Sized>(
    alpha: AlphaIndex,
    t: f64,
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<f64> {
    cfg.validate()?;
    cfg.check_time(t)?;
    if alpha.is_one() || t == 0.0 {
        return Ok(t);
    }
    let a = alpha.get();
    let h = cfg.dtau;
    let (mut y, mut tau) = (0.0, 0.0);
    for _ in 0..STEP_CAP {
        let ln_delta = ln_increment(a, h, rng);
        let delta = ln_delta.exp();
        if y + delta > t {
            return Ok(crossing_time(a, tau, h, y, ln_delta, t));
        }
        y += delta;
        tau += h;
    }
    Err(Error::PathBudget {
        level: t,
        steps: STEP_CAP,
    })
}

/// `T(tau)` as a sum of increments over the `dtau` grid.
pub fn sample_stable_value<R: Rng + ?Sized>(alpha: AlphaIndex, tau: f64, dtau: f64, rng: &mut R) -> Result<f64> {
    check_step(dtau)?;
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(invalid("tau", "must be finite and >= 0"));
    }
    if alpha.is_one() || tau == 0.0 {
        return Ok(tau);
    }
    let n = (tau / dtau).ceil().max(1.0) as usize;
    let h = tau / n as f64;
    let mut sum = 0.0;
    for _ in 0..n {
        sum += ln_increment(alpha.get(), h, rng).exp();
    }
    Ok(sum)
}

/// A `T`-path on the grid `0, dtau, 2 dtau, ...` up to `tau_max` (the last
/// step is shortened to land on `tau_max`). Every increment is positive, but
/// for small `alpha` one huge jump can absorb later ones in rounding, so the
/// stored values are only guaranteed nondecreasing.
pub fn sample_stable_path<R: Rng + ?Sized>(
    alpha: AlphaIndex,
    tau_max: f64,
    dtau: f64,
    rng: &mut R,
) -> Result<SamplePath> {
    check_step(dtau)?;
    if !(tau_max >= 0.0 && tau_max.is_finite()) {
        return Err(invalid("tau_max", "must be finite and >= 0"));
    }
    let n = (tau_max / dtau).ceil() as usize;
    let mut grid = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    grid.push(0.0);
    values.push(0.0);
    for k in 1..=n {
        let tau = (k as f64 * dtau).min(tau_max);
        let h = tau - grid[k - 1];
        let inc = sample_stable_increment(alpha, h, rng)?;
        grid.push(tau);
        values.push(values[k - 1] + inc);
    }
    Ok(SamplePath { grid, values })
}

/// The inverse of a sampled `T`-path evaluated on `t_grid`, with the same
/// in-step placement as [`sample_inverse_subordinator`].
pub fn invert_stable_path(alpha: AlphaIndex, path: &SamplePath, t_grid: &[f64]) -> Result<SamplePath> {
    check_grid(t_grid)?;
    let a = alpha.get();
    let mut values = Vec::with_capacity(t_grid.len());
    let mut k = 0;
    for &t in t_grid {
        if t < 0.0 {
            return Err(invalid("t_grid", "must be >= 0"));
        }
        while k + 1 < path.len() && path.values[k + 1] <= t {
            k += 1;
        }
        if k + 1 == path.len() {
            return Err(Error::PathBudget {
                level: t,
                steps: path.len() - 1,
            });
        }
        let h = path.grid[k + 1] - path.grid[k];
        let delta = path.values[k + 1] - path.values[k];
        values.push(if alpha.is_one() {
            path.grid[k] + (t - path.values[k])
        } else {
            crossing_time(a, path.grid[k], h, path.values[k], delta.ln(), t)
        });
    }
    SamplePath::new(t_grid.to_vec(), values)
}

/// One `S`-path on `t_grid` from a single underlying `T`-path, walked lazily.
/// Values are nondecreasing; `S(0) = 0`.
pub fn sample_inverse_path<R: Rng + ?Sized>(
    alpha: AlphaIndex,
    t_grid: &[f64],
    cfg: &SimConfig,
    rng: &mut R,
) -> Result<SamplePath> {
    cfg.validate()?;
    check_grid(t_grid)?;
    for &t in t_grid {
        cfg.check_time(t)?;
    }
    if alpha.is_one() {
        return SamplePath::new(t_grid.to_vec(), t_grid.to_vec());
    }
    let a = alpha.get();
    let h = cfg.dtau;
    let mut values = Vec::with_capacity(t_grid.len());
    let (mut y, mut tau) = (0.0, 0.0);
    let mut steps = 0;
    let mut i = 0;
    while i < t_grid.len() {
        if t_grid[i] == 0.0 {
            values.push(0.0);
            i += 1;
            continue;
        }
        if steps == STEP_CAP {
            return Err(Error::PathBudget {
                level: t_grid[i],
                steps,
            });
        }
        let ln_delta = ln_increment(a, h, rng);
        let next = y + ln_delta.exp();
        while i < t_grid.len() && t_grid[i] < next {
            values.push(crossing_time(a, tau, h, y, ln_delta, t_grid[i]));
            i += 1;
        }
        y = next;
        tau += h;
        steps += 1;
    }
    SamplePath::new(t_grid.to_vec(), values)
}

/// `cfg.n_paths` independent draws of `S(t)`, path `i` on stream `i`.
pub fn sample_inverse_batch(alpha: AlphaIndex, t: f64, cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
        sample_inverse_subordinator(alpha, t, cfg, rng)
    })
}

/// `cfg.n_paths` independent draws of `T(tau)` summed over the `cfg.dtau` grid.
pub fn sample_stable_batch(alpha: AlphaIndex, tau: f64, cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
        sample_stable_value(alpha, tau, cfg.dtau, rng)
    })
}

/// `cfg.n_paths` independent `S`-paths on a shared grid.
pub fn sample_inverse_paths(alpha: AlphaIndex, t_grid: &[f64], cfg: &SimConfig) -> Result<Vec<SamplePath>> {
    cfg.validate()?;
    par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
        sample_inverse_path(alpha, t_grid, cfg, rng)
    })
}

/// Number of renewals up to time `t` for i.i.d. waiting times, counting at
/// most `n_steps` of them.
///
/// For `alpha < 1` the waits are Pareto with density `alpha x^(-alpha-1)` on
/// `x >= 1`; for `alpha = 1` every wait is exactly 1.
pub fn ctrw_counting_sample<R: Rng + ?Sized>(alpha: AlphaIndex, n_steps: u64, t: f64, rng: &mut R) -> Result<u64> {
    if n_steps == 0 {
        return Err(invalid("n_steps", "must be >= 1"));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(invalid("t", "must be finite and >= 0"));
    }
    if alpha.is_one() {
        return Ok((t.floor() as u64).min(n_steps));
    }
    let inv_a = 1.0 / alpha.get();
    let mut elapsed = 0.0;
    let mut count = 0;
    while count < n_steps {
        elapsed += open01(rng).powf(-inv_a);
        if elapsed > t {
            break;
        }
        count += 1;
    }
    Ok(count)
}

/// Renewal counts `N_t` on a nondecreasing `t_grid` from one sequence of
/// waiting times (same laws as [`ctrw_counting_sample`]).
pub fn ctrw_counting_path<R: Rng + ?Sized>(alpha: AlphaIndex, t_grid: &[f64], rng: &mut R) -> Result<SamplePath> {
    check_grid(t_grid)?;
    if t_grid[0] < 0.0 {
        return Err(invalid("t_grid", "must be >= 0"));
    }
    let inv_a = 1.0 / alpha.get();
    let mut wait = || if alpha.is_one() { 1.0 } else { open01(rng).powf(-inv_a) };
    let mut next_renewal = wait();
    let mut count = 0u64;
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        while next_renewal <= t {
            count += 1;
            next_renewal += wait();
        }
        values.push(count as f64);
    }
    SamplePath::new(t_grid.to_vec(), values)
}

/// Rescaled counts `Gamma(1 - alpha) N_{c t} / c^alpha`, which converge in law
/// to `S(t)` as `c` grows (`N_{c t} / c` for `alpha = 1`).
pub fn ctrw_rescaled_batch(alpha: AlphaIndex, t: f64, c: f64, n_steps: u64, cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if !(c > 0.0 && c.is_finite()) {
        return Err(invalid("c", "must be finite and > 0"));
    }
    let a = alpha.get();
    let norm = if alpha.is_one() { 1.0 } else { gamma(1.0 - a)? } / c.powf(a);
    par_map_paths(cfg.seed, cfg.n_paths, |_, rng| {
        Ok(norm * ctrw_counting_sample(alpha, n_steps, c * t, rng)? as f64)
    })
}

/// Long-format dump with columns `path_id,t,value`.
pub fn write_paths_csv<W: Write>(out: &mut W, paths: &[SamplePath]) -> std::io::Result<()> {
    out.write_all(b"path_id,t,value\n")?;
    for (id, p) in paths.iter().enumerate() {
        for (t, v) in p.grid.iter().zip(&p.values) {
            writeln!(out, "{id},{},{}", fmt_f64(*t), fmt_f64(*v))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::path_rng;
    use crate::specfun::mittag_leffler_neg;
    use crate::stats::{ks_two_sample, MeanEstimate};

    fn al(a: f64) -> AlphaIndex {
        AlphaIndex::new(a).unwrap()
    }

    fn cfg(n: usize) -> SimConfig {
        SimConfig {
            seed: 2024,
            n_paths: n,
            dtau: 0.05,
            t_max: 10.0,
        }
    }

    #[test]
    fn deterministic_boundary_case() {
        let mut rng = path_rng(0, 0);
        assert_eq!(sample_stable_increment(al(1.0), 0.5, &mut rng).unwrap(), 0.5);
        assert_eq!(
            sample_inverse_subordinator(al(1.0), 3.0, &cfg(1), &mut rng).unwrap(),
            3.0
        );
        let p = sample_inverse_path(al(1.0), &[0.0, 0.5, 2.0], &cfg(1), &mut rng).unwrap();
        assert_eq!(p.values, vec![0.0, 0.5, 2.0]);
    }

    #[test]
    fn laplace_transform_of_increment() {
        let c = cfg(200_000);
        let xs: Vec<f64> = par_map_paths(c.seed, c.n_paths, |_, rng| {
            Ok((-sample_stable_increment(al(0.5), 1.0, rng)?).exp())
        })
        .unwrap();
        let e = MeanEstimate::from_samples(&xs);
        assert!(e.z_score((-1.0f64).exp()) < 3.0, "{e:?}");
    }

    #[test]
    fn inverse_mean_and_laplace_identity() {
        let c = cfg(200_000);
        let s = sample_inverse_batch(al(0.6), 1.0, &c).unwrap();
        let mean = MeanEstimate::from_samples(&s);
        assert!(mean.z_score(1.0 / gamma(1.6).unwrap()) < 3.0, "{mean:?}");
        let ex: Vec<f64> = s.iter().map(|x| (-x).exp()).collect();
        let lap = MeanEstimate::from_samples(&ex);
        assert!(lap.z_score(mittag_leffler_neg(al(0.6), 1.0).unwrap()) < 3.0, "{lap:?}");
    }

    #[test]
    fn coarse_step_stays_unbiased() {
        let fine = cfg(100_000);
        let coarse = SimConfig { dtau: 2.0, ..fine };
        let a = sample_inverse_batch(al(0.7), 1.5, &fine).unwrap();
        let b = sample_inverse_batch(al(0.7), 1.5, &SimConfig { seed: 99, ..coarse }).unwrap();
        assert!(ks_two_sample(&a, &b).passes(0.01));
    }

    #[test]
    fn paths_are_monotone_and_start_at_zero() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        for i in 0..200 {
            let mut rng = path_rng(5, i);
            let p = sample_inverse_path(al(0.5), &grid, &cfg(1), &mut rng).unwrap();
            assert_eq!(p.values[0], 0.0);
            assert!(p.values.windows(2).all(|w| w[1] >= w[0]));
            let tp = sample_stable_path(al(0.5), 3.0, 0.05, &mut rng).unwrap();
            assert!(tp.values.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn inverse_of_common_path_recovers_operational_time() {
        let mut rng = path_rng(17, 0);
        let path = sample_stable_path(al(0.7), 5.0, 0.05, &mut rng).unwrap();
        let levels: Vec<f64> = path.values[..path.len() - 1].to_vec();
        let s = invert_stable_path(al(0.7), &path, &levels).unwrap();
        for (k, v) in s.values.iter().enumerate() {
            assert!((v - path.grid[k]).abs() <= 0.05 + 1e-12, "k = {k}");
        }
    }

    #[test]
    fn path_marginal_matches_point_sampler() {
        let c = cfg(50_000);
        let paths = sample_inverse_paths(al(0.8), &[0.5, 1.0], &c).unwrap();
        let end: Vec<f64> = paths.iter().map(|p| p.values[1]).collect();
        let point = sample_inverse_batch(al(0.8), 1.0, &SimConfig { seed: 7, ..c }).unwrap();
        assert!(ks_two_sample(&end, &point).passes(0.01));
    }

    #[test]
    fn step_budget_is_reported() {
        let c = SimConfig {
            dtau: 1e-9,
            t_max: 1e9,
            ..cfg(1)
        };
        // Reaching level 1e9 at alpha 0.9 in steps of 1e-9 needs far more than the cap.
        let mut rng = path_rng(1, 0);
        let err = sample_inverse_subordinator(al(0.9), 1e9, &c, &mut rng).unwrap_err();
        assert!(matches!(err, Error::PathBudget { .. }));
    }

    #[test]
    fn time_outside_horizon_is_rejected() {
        let mut rng = path_rng(1, 0);
        assert!(sample_inverse_subordinator(al(0.5), 11.0, &cfg(1), &mut rng).is_err());
        assert!(sample_inverse_path(al(0.5), &[1.0, 0.5], &cfg(1), &mut rng).is_err());
    }

    #[test]
    fn ctrw_trivial_cases() {
        let mut rng = path_rng(3, 0);
        assert_eq!(ctrw_counting_sample(al(0.5), 1000, 0.9, &mut rng).unwrap(), 0);
        assert_eq!(ctrw_counting_sample(al(1.0), 1000, 7.9, &mut rng).unwrap(), 7);
        assert_eq!(ctrw_counting_sample(al(1.0), 5, 7.9, &mut rng).unwrap(), 5);
    }

    #[test]
    fn ctrw_path_matches_point_counts() {
        let grid = [0.5, 1.0, 3.0, 7.9];
        let p = ctrw_counting_path(al(1.0), &grid, &mut path_rng(1, 0)).unwrap();
        assert_eq!(p.values, vec![0.0, 1.0, 3.0, 7.0]);
        let q = ctrw_counting_path(al(0.6), &grid, &mut path_rng(1, 0)).unwrap();
        assert!(q.values.windows(2).all(|w| w[1] >= w[0]));
        let last = ctrw_counting_sample(al(0.6), u64::MAX, 7.9, &mut path_rng(1, 0)).unwrap();
        assert_eq!(q.last_value(), last as f64);
    }

    #[test]
    fn csv_dump_layout() {
        let p = SamplePath::new(vec![0.0, 1.0], vec![0.0, 0.5]).unwrap();
        let mut buf = Vec::new();
        write_paths_csv(&mut buf, &[p.clone(), p]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "path_id,t,value");
        assert_eq!(lines.len(), 5);
        assert!(lines[4].starts_with("1,"));
        assert!(!text.contains('\r'));
    }
}
