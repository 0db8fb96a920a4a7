//! C ABI over the `subdiff` engine.
//!
//! Every function returns a [`SubdiffStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be read with
//! [`subdiff_last_error_message`]. Samplers and FFPE solutions are opaque
//! handles released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use subdiff::ffpe::{solve_ffpe, uniform_grid, FfpeProblem, FfpeSolution};
use subdiff::pricing::{subordinated_price_mc, subordinated_price_quadrature, Contract};
use subdiff::quadrature::QuadConfig;
use subdiff::specfun::{f_alpha, gamma, inverse_subordinator_density, mittag_leffler_neg, AlphaIndex, EvalConfig};
use subdiff::subdiffusion::{subordinated_density, ModelParams};
use subdiff::subordinator::{sample_inverse_batch, sample_stable_batch, SimConfig};
use subdiff::Error;

/// Outcome of an FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdiffStatus {
    Ok = 0,
    InvalidParameter = 1,
    Domain = 2,
    Pole = 3,
    SeriesNonConvergence = 4,
    Quadrature = 5,
    PathBudget = 6,
    Instability = 7,
    NullPointer = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

impl From<&Error> for SubdiffStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => Self::InvalidParameter,
            Error::Domain { .. } => Self::Domain,
            Error::Pole(_) => Self::Pole,
            Error::SeriesNonConvergence { .. } => Self::SeriesNonConvergence,
            Error::Quadrature { .. } => Self::Quadrature,
            Error::PathBudget { .. } => Self::PathBudget,
            Error::Instability { .. } => Self::Instability,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SubdiffStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SubdiffStatus::NullPointer, format!("`{what}` is null"))
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SubdiffStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SubdiffStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SubdiffStatus::Panic
        }
    }
}

fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the API contract, valid for a write of T.
    unsafe { out.write(value) };
    Ok(())
}

fn out_slice<'a>(out: *mut f64, len: usize, needed: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    if len < needed {
        return Err(Failure(
            SubdiffStatus::BufferTooSmall,
            format!("`{what}` holds {len} values, {needed} needed"),
        ));
    }
    // SAFETY: non-null and, per the API contract, valid for `len >= needed` writes.
    Ok(unsafe { std::slice::from_raw_parts_mut(out, needed) })
}

/// Length in bytes (without the terminating nul) of the last error message on
/// this thread, or 0 if there is none.
#[no_mangle]
pub extern "C" fn subdiff_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message on this thread into `buf` as a nul-terminated
/// string, truncating to `len - 1` bytes. Returns the number of bytes written
/// without the nul.
///
/// # Safety
/// `buf` must be valid for `len` bytes of writes, or null when `len` is 0.
#[no_mangle]
pub unsafe extern "C" fn subdiff_last_error_message(buf: *mut c_char, len: usize) -> usize {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |c| c.as_bytes());
        let n = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
        n
    })
}

/// Clears the last error message on this thread.
#[no_mangle]
pub extern "C" fn subdiff_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// `Gamma(z)`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_gamma(z: f64, out: *mut f64) -> SubdiffStatus {
    guard(|| write_out(out, gamma(z)?, "out"))
}

/// `E_alpha(-x)` for `x >= 0`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_mittag_leffler_neg(alpha: f64, x: f64, out: *mut f64) -> SubdiffStatus {
    guard(|| write_out(out, mittag_leffler_neg(AlphaIndex::new(alpha)?, x)?, "out"))
}

/// `F_alpha(z)` for `0 < alpha < 1`, `z >= 0`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_f_alpha(alpha: f64, z: f64, out: *mut f64) -> SubdiffStatus {
    guard(|| write_out(out, f_alpha(AlphaIndex::new(alpha)?, z, &EvalConfig::default())?, "out"))
}

/// Density of the inverse subordinator `S(t)` at `x`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_inverse_density(alpha: f64, t: f64, x: f64, out: *mut f64) -> SubdiffStatus {
    guard(|| write_out(out, inverse_subordinator_density(AlphaIndex::new(alpha)?, t, x)?, "out"))
}

/// Density of `B_{S(t)}` at `x` with diffusion coefficient `d`, to absolute
/// tolerance `tol`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_density(alpha: f64, d: f64, t: f64, x: f64, tol: f64, out: *mut f64) -> SubdiffStatus {
    guard(|| {
        let params = ModelParams::new(alpha, d)?;
        let quad = QuadConfig::new(tol, 1e-11, 4000)?;
        write_out(out, subordinated_density(&params, t, x, &quad)?, "out")
    })
}

/// Subordinated call price by quadrature in dimensionless units
/// (`beta = 2 r / sigma^2`, `t = sigma^2 t_real / 2`).
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_price_quadrature(
    alpha: f64,
    t: f64,
    spot: f64,
    strike: f64,
    beta: f64,
    tol: f64,
    out: *mut f64,
) -> SubdiffStatus {
    guard(|| {
        let c = Contract::new(spot, strike, beta)?;
        let quad = QuadConfig::new(tol, 1e-10, 4000)?;
        write_out(
            out,
            subordinated_price_quadrature(AlphaIndex::new(alpha)?, t, &c, &quad)?,
            "out",
        )
    })
}

/// Monte Carlo subordinated call price with its standard error.
///
/// # Safety
/// `price` and `std_error` must each be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn subdiff_price_mc(
    alpha: f64,
    t: f64,
    spot: f64,
    strike: f64,
    beta: f64,
    seed: u64,
    n_paths: usize,
    dtau: f64,
    price: *mut f64,
    std_error: *mut f64,
) -> SubdiffStatus {
    guard(|| {
        let c = Contract::new(spot, strike, beta)?;
        let cfg = SimConfig {
            seed,
            n_paths,
            dtau,
            t_max: t,
        };
        let est = subordinated_price_mc(AlphaIndex::new(alpha)?, t, &c, &cfg)?;
        write_out(price, est.mean, "price")?;
        write_out(std_error, est.std_error, "std_error")
    })
}

/// Seeded sampler of the subordinator `T` and its inverse `S`.
pub struct SubdiffSampler {
    alpha: AlphaIndex,
    seed: u64,
    dtau: f64,
    t_max: f64,
}

impl SubdiffSampler {
    fn config(&self, n_paths: usize) -> SimConfig {
        SimConfig {
            seed: self.seed,
            n_paths,
            dtau: self.dtau,
            t_max: self.t_max,
        }
    }
}

/// Creates a sampler. Draws of `S(t)` need `t <= t_max`.
///
/// # Safety
/// `out` must be valid for one write. The handle must be released with
/// [`subdiff_sampler_free`].
#[no_mangle]
pub unsafe extern "C" fn subdiff_sampler_new(
    alpha: f64,
    seed: u64,
    dtau: f64,
    t_max: f64,
    out: *mut *mut SubdiffSampler,
) -> SubdiffStatus {
    guard(|| {
        let s = SubdiffSampler {
            alpha: AlphaIndex::new(alpha)?,
            seed,
            dtau,
            t_max,
        };
        s.config(1).validate()?;
        write_out(out, Box::into_raw(Box::new(s)), "out")
    })
}

/// Releases a sampler; null is ignored.
///
/// # Safety
/// `sampler` must come from [`subdiff_sampler_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn subdiff_sampler_free(sampler: *mut SubdiffSampler) {
    if !sampler.is_null() {
        drop(Box::from_raw(sampler));
    }
}

/// Fills `out[0..n]` with independent draws of `S(t)`. The draws depend only
/// on the sampler's seed and `n`, never on the worker count.
///
/// # Safety
/// `sampler` must be a live handle and `out` valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn subdiff_sampler_inverse(
    sampler: *const SubdiffSampler,
    t: f64,
    n: usize,
    out: *mut f64,
) -> SubdiffStatus {
    guard(|| {
        let s = sampler.as_ref().ok_or_else(|| null("sampler"))?;
        let draws = sample_inverse_batch(s.alpha, t, &s.config(n))?;
        out_slice(out, n, n, "out")?.copy_from_slice(&draws);
        Ok(())
    })
}

/// Fills `out[0..n]` with independent draws of `T(tau)`.
///
/// # Safety
/// `sampler` must be a live handle and `out` valid for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn subdiff_sampler_stable(
    sampler: *const SubdiffSampler,
    tau: f64,
    n: usize,
    out: *mut f64,
) -> SubdiffStatus {
    guard(|| {
        let s = sampler.as_ref().ok_or_else(|| null("sampler"))?;
        let draws = sample_stable_batch(s.alpha, tau, &s.config(n))?;
        out_slice(out, n, n, "out")?.copy_from_slice(&draws);
        Ok(())
    })
}

/// A solved fractional Fokker-Planck run.
pub struct SubdiffFfpe {
    solution: FfpeSolution,
}

/// Solves the fractional Fokker-Planck equation on `[-x_max, x_max]` with step
/// `dx`, from a Gaussian of operational age `tau0`, up to `t_end`. The time
/// step is `safety` times the largest stable step.
///
/// # Safety
/// `out` must be valid for one write. The handle must be released with
/// [`subdiff_ffpe_free`].
#[no_mangle]
pub unsafe extern "C" fn subdiff_ffpe_solve(
    alpha: f64,
    d: f64,
    x_max: f64,
    dx: f64,
    t_end: f64,
    tau0: f64,
    safety: f64,
    out: *mut *mut SubdiffFfpe,
) -> SubdiffStatus {
    guard(|| {
        if !(dx > 0.0 && x_max > dx && t_end > 0.0 && t_end.is_finite() && safety > 0.0 && safety <= 1.0) {
            return Err(Failure(
                SubdiffStatus::InvalidParameter,
                "need dx > 0, x_max > dx, t_end > 0 and 0 < safety <= 1".into(),
            ));
        }
        let params = ModelParams::new(alpha, d)?;
        let xs = uniform_grid(-x_max, x_max, (2.0 * x_max / dx).round() as usize);
        let probe = FfpeProblem::gaussian_start(params, xs.clone(), vec![0.0, t_end], tau0)?;
        let nt = (t_end / (safety * probe.admissible_dt()?)).ceil().max(1.0) as usize;
        let problem = FfpeProblem::gaussian_start(params, xs, uniform_grid(0.0, t_end, nt), tau0)?;
        let solution = solve_ffpe(&problem)?;
        write_out(out, Box::into_raw(Box::new(SubdiffFfpe { solution })), "out")
    })
}

/// Releases a solution; null is ignored.
///
/// # Safety
/// `ffpe` must come from [`subdiff_ffpe_solve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn subdiff_ffpe_free(ffpe: *mut SubdiffFfpe) {
    if !ffpe.is_null() {
        drop(Box::from_raw(ffpe));
    }
}

/// Number of spatial points and of time points (including `t = 0`).
///
/// # Safety
/// `ffpe` must be a live handle; `nx` and `nt` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn subdiff_ffpe_shape(ffpe: *const SubdiffFfpe, nx: *mut usize, nt: *mut usize) -> SubdiffStatus {
    guard(|| {
        let f = ffpe.as_ref().ok_or_else(|| null("ffpe"))?;
        write_out(nx, f.solution.x_grid.len(), "nx")?;
        write_out(nt, f.solution.t_grid.len(), "nt")
    })
}

/// Copies the spatial grid into `out`, which holds `len` values.
///
/// # Safety
/// `ffpe` must be a live handle and `out` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn subdiff_ffpe_x_grid(ffpe: *const SubdiffFfpe, out: *mut f64, len: usize) -> SubdiffStatus {
    guard(|| {
        let f = ffpe.as_ref().ok_or_else(|| null("ffpe"))?;
        let xs = &f.solution.x_grid;
        out_slice(out, len, xs.len(), "out")?.copy_from_slice(xs);
        Ok(())
    })
}

/// Copies the density at time index `n` into `out` and its time into `t`.
///
/// # Safety
/// `ffpe` must be a live handle, `out` valid for `len` writes and `t` for one.
#[no_mangle]
pub unsafe extern "C" fn subdiff_ffpe_profile(
    ffpe: *const SubdiffFfpe,
    n: usize,
    t: *mut f64,
    out: *mut f64,
    len: usize,
) -> SubdiffStatus {
    guard(|| {
        let f = ffpe.as_ref().ok_or_else(|| null("ffpe"))?;
        let row = f.solution.values.get(n).ok_or_else(|| {
            Failure(
                SubdiffStatus::InvalidParameter,
                format!("time index {n} out of range (0..{})", f.solution.t_grid.len()),
            )
        })?;
        out_slice(out, len, row.len(), "out")?.copy_from_slice(row);
        write_out(t, f.solution.t_grid[n], "t")
    })
}
