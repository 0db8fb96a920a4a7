//! The fractional Fokker-Planck equation in integral form,
//!
//! ```text
//! p(t, x) = f(x) + (1 / Gamma(alpha)) int_0^t (t - s)^(alpha - 1) [L p](s, x) ds,
//! ```
//!
//! with `L = (D / 4) d^2/dx^2`, whose semigroup is the parent Gaussian of
//! variance `D tau / 2`.
//!
//! Time is discretized by product integration: `L p` is held at its left value
//! on each step and the kernel is integrated exactly, giving
//!
//! ```text
//! p_n = f + dt^alpha / Gamma(1 + alpha) * sum_{j<n} b_{n-1-j} L p_j,   b_m = (m + 1)^alpha - m^alpha.
//! ```
//!
//! Space uses the three-point Laplacian with zero-flux ends (the ghost value
//! equals the boundary value), so `sum_i p_i dx` is conserved exactly. The
//! explicit scheme needs `dt^alpha D / (Gamma(1 + alpha) dx^2) <= 1`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::quadrature::{try_integrate_with_breakpoints, QuadConfig};
use crate::specfun::gamma;
use crate::subdiffusion::{density_grid_from, subordinated_density, trapezoid, ModelParams};

const UNIFORM_TOL: f64 = 1e-9;

/// A run of the fractional Fokker-Planck equation on uniform grids.
#[derive(Debug, Clone, PartialEq)]
pub struct FfpeProblem {
    pub params: ModelParams,
    pub x_grid: Vec<f64>,
    /// Uniform, starting at 0.
    pub t_grid: Vec<f64>,
    pub initial_profile: Vec<f64>,
}

fn uniform_step(grid: &[f64], name: &'static str) -> Result<f64> {
    if grid.len() < 2 {
        return Err(invalid(name, "needs at least two points"));
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0 && h.is_finite()) {
        return Err(invalid(name, "must be strictly increasing and finite"));
    }
    for (i, &g) in grid.iter().enumerate() {
        if (g - (grid[0] + i as f64 * h)).abs() > UNIFORM_TOL * h.max(grid[0].abs()) {
            return Err(invalid(name, "must be uniform"));
        }
    }
    Ok(h)
}

/// `n + 1` equally spaced points from `a` to `b`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / n as f64;
    (0..=n).map(|i| a + i as f64 * h).collect()
}

impl FfpeProblem {
    pub fn new(params: ModelParams, x_grid: Vec<f64>, t_grid: Vec<f64>, initial_profile: Vec<f64>) -> Result<Self> {
        let p = Self {
            params,
            x_grid,
            t_grid,
            initial_profile,
        };
        p.validate()?;
        Ok(p)
    }

    /// Starts from the parent Gaussian at operational age `tau0 > 0`, the
    /// regularized point source.
    pub fn gaussian_start(params: ModelParams, x_grid: Vec<f64>, t_grid: Vec<f64>, tau0: f64) -> Result<Self> {
        if !(tau0 > 0.0 && tau0.is_finite()) {
            return Err(invalid("tau0", "must be finite and > 0"));
        }
        let s = params.d * tau0;
        let f = x_grid.iter().map(|x| (-x * x / s).exp() / (PI * s).sqrt()).collect();
        Self::new(params, x_grid, t_grid, f)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        uniform_step(&self.x_grid, "x_grid")?;
        uniform_step(&self.t_grid, "t_grid")?;
        if self.t_grid[0] != 0.0 {
            return Err(invalid("t_grid", "must start at 0"));
        }
        if self.initial_profile.len() != self.x_grid.len() {
            return Err(invalid("initial_profile", "length must match x_grid"));
        }
        if self.initial_profile.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(invalid("initial_profile", "must be finite and >= 0"));
        }
        let mass = trapezoid(&self.x_grid, &self.initial_profile);
        if (mass - 1.0).abs() > 1e-6 {
            return Err(invalid("initial_profile", format!("integrates to {mass}, not 1")));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.x_grid[1] - self.x_grid[0]
    }

    pub fn dt(&self) -> f64 {
        self.t_grid[1] - self.t_grid[0]
    }

    /// Largest time step the explicit scheme admits on this spatial grid.
    pub fn admissible_dt(&self) -> Result<f64> {
        let a = self.params.alpha.get();
        let dx = self.dx();
        Ok((gamma(1.0 + a)? * dx * dx / self.params.d).powf(1.0 / a))
    }
}

/// Densities at every time of the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FfpeSolution {
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    /// `values[n][i]` is the density at `t_grid[n]`, `x_grid[i]`.
    pub values: Vec<Vec<f64>>,
}

impl FfpeSolution {
    /// Discrete mass `sum_i p_i dx` at time index `n`, the conserved quantity.
    pub fn mass(&self, n: usize) -> f64 {
        let dx = self.x_grid[1] - self.x_grid[0];
        self.values[n].iter().sum::<f64>() * dx
    }

    /// Trapezoidal mass at time index `n`.
    pub fn trapezoid_mass(&self, n: usize) -> f64 {
        trapezoid(&self.x_grid, &self.values[n])
    }

    pub fn min_value(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|row| row.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }
}

fn apply_operator(p: &[f64], coeff: f64, out: &mut [f64]) {
    let n = p.len();
    for i in 0..n {
        let left = if i == 0 { p[0] } else { p[i - 1] };
        let right = if i + 1 == n { p[n - 1] } else { p[i + 1] };
        out[i] = coeff * (left - 2.0 * p[i] + right);
    }
}

/// Advances the problem over its whole time grid.
///
/// Fails with [`Error::Instability`] when the time step exceeds
/// [`FfpeProblem::admissible_dt`]. For `alpha = 1` the weights are all one and
/// the scheme is forward Euler, which is run without the history sum.
pub fn solve_ffpe(problem: &FfpeProblem) -> Result<FfpeSolution> {
    problem.validate()?;
    let dt = problem.dt();
    let admissible = problem.admissible_dt()?;
    if dt > admissible * (1.0 + 1e-12) {
        return Err(Error::Instability { dt, admissible });
    }
    let a = problem.params.alpha.get();
    let dx = problem.dx();
    let coeff = problem.params.d / (4.0 * dx * dx);
    let scale = dt.powf(a) / gamma(1.0 + a)?;
    let nx = problem.x_grid.len();
    let nt = problem.t_grid.len();
    let f = &problem.initial_profile;

    let mut values = Vec::with_capacity(nt);
    values.push(f.clone());
    if problem.params.alpha.is_one() {
        let mut lp = vec![0.0; nx];
        for n in 1..nt {
            let prev = &values[n - 1];
            apply_operator(prev, coeff, &mut lp);
            let next: Vec<f64> = prev.iter().zip(&lp).map(|(p, l)| p + scale * l).collect();
            values.push(next);
        }
    } else {
        let weights: Vec<f64> = (0..nt).map(|m| (m as f64 + 1.0).powf(a) - (m as f64).powf(a)).collect();
        let mut history: Vec<Vec<f64>> = Vec::with_capacity(nt);
        let mut acc = vec![0.0; nx];
        for n in 1..nt {
            let mut lp = vec![0.0; nx];
            apply_operator(&values[n - 1], coeff, &mut lp);
            history.push(lp);
            acc.iter_mut().for_each(|v| *v = 0.0);
            for (j, lp_j) in history.iter().enumerate() {
                let w = weights[n - 1 - j];
                for (s, l) in acc.iter_mut().zip(lp_j) {
                    *s += w * l;
                }
            }
            values.push(f.iter().zip(&acc).map(|(fi, s)| fi + scale * s).collect());
        }
    }
    Ok(FfpeSolution {
        t_grid: problem.t_grid.clone(),
        x_grid: problem.x_grid.clone(),
        values,
    })
}

/// Maximum deviation at the final time between the full run and a run
/// restarted from the state at `restart_index` with its history discarded.
/// Zero for a memoryless equation; positive when the past still acts.
pub fn memory_discrepancy(problem: &FfpeProblem, restart_index: usize) -> Result<f64> {
    let full = solve_ffpe(problem)?;
    let nt = problem.t_grid.len();
    if restart_index == 0 || restart_index + 1 >= nt {
        return Err(invalid("restart_index", "must be an interior time index"));
    }
    let t0 = problem.t_grid[restart_index];
    let restarted = FfpeProblem {
        params: problem.params,
        x_grid: problem.x_grid.clone(),
        t_grid: problem.t_grid[restart_index..].iter().map(|t| t - t0).collect(),
        initial_profile: full.values[restart_index].clone(),
    };
    let tail = solve_ffpe(&restarted)?;
    let a = full.values.last().expect("nonempty");
    let b = tail.values.last().expect("nonempty");
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Exact solution for a Gaussian start of age `tau0` at time index `n`.
pub fn oracle_profile(problem: &FfpeProblem, n: usize, tau0: f64, quad: &QuadConfig) -> Result<Vec<f64>> {
    let t = problem.t_grid[n];
    if t == 0.0 {
        return Ok(problem.initial_profile.clone());
    }
    Ok(density_grid_from(&problem.params, t, &problem.x_grid, tau0, quad)?.values)
}

/// Per-time quality report of a solved run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FfpeSummaryRow {
    pub t: f64,
    pub mass_error: f64,
    pub min_value: f64,
    pub oracle_max_error: f64,
}

/// Mass error, minimum and oracle max-norm error at the requested time indices.
pub fn summarize(
    problem: &FfpeProblem,
    solution: &FfpeSolution,
    indices: &[usize],
    tau0: f64,
    quad: &QuadConfig,
) -> Result<Vec<FfpeSummaryRow>> {
    let m0 = solution.mass(0);
    indices
        .iter()
        .map(|&n| {
            let exact = oracle_profile(problem, n, tau0, quad)?;
            let row = &solution.values[n];
            Ok(FfpeSummaryRow {
                t: solution.t_grid[n],
                mass_error: solution.mass(n) - m0,
                min_value: row.iter().copied().fold(f64::INFINITY, f64::min),
                oracle_max_error: row.iter().zip(&exact).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max),
            })
        })
        .collect()
}

/// `(lhs, rhs)` of the Laplace-space subordination identity at `x`:
/// `lhs = int_0^inf exp(-u t) p(t, x) dt` by quadrature of the density, and
/// `rhs = u^(alpha - 1) pR(u^alpha, x)` with the parent transform
/// `pR(s, x) = exp(-2 |x| sqrt(s / D)) / sqrt(s D)`.
pub fn laplace_subordination_check(params: &ModelParams, x: f64, u: f64) -> Result<(f64, f64)> {
    params.validate()?;
    if !(u > 0.0 && u.is_finite()) {
        return Err(invalid("u", "must be finite and > 0"));
    }
    let a = params.alpha.get();
    let s = u.powf(a);
    let rhs = u.powf(a - 1.0) * (-2.0 * x.abs() * (s / params.d).sqrt()).exp() / (s * params.d).sqrt();

    // t = v^2 keeps the t^(-alpha/2) behaviour at x = 0 integrable and smooth;
    // exp(-u t) < 1e-17 beyond t = 40 / u.
    let inner = QuadConfig::new(1e-14, 1e-11, 2000)?;
    let outer = QuadConfig::new(1e-14, 1e-9, 2000)?;
    let v_max = (40.0 / u).sqrt();
    let points: Vec<f64> = [0.0, 0.1, 0.3, 1.0].iter().map(|f| f * v_max).collect();
    let integrand = |v: f64| -> Result<f64> {
        let t = v * v;
        Ok(2.0 * v * (-u * t).exp() * subordinated_density(params, t, x, &inner)?)
    };
    let lhs = try_integrate_with_breakpoints(integrand, &points, &outer)?.value;
    Ok((lhs, rhs))
}
