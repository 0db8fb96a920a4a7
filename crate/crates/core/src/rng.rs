//! Reproducible random streams and the worker pool.
//!
//! Every path owns a ChaCha8 stream selected by `(seed, path index)`, so a
//! batch is a pure function of the seed no matter how paths are scheduled.

use rand::distr::Open01;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SUBDIFF_THREADS";

/// Generator for path `index` under `seed`.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform variate on the open interval `(0, 1)`.
pub fn open01<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Open01)
}

/// Worker count from `SUBDIFF_THREADS`, or `None` to use rayon's default.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(invalid("SUBDIFF_THREADS", format!("`{s}` is not a positive integer"))),
        },
    }
}

/// Evaluates `f(i)` for `i in 0..n` in parallel, results in index order.
pub fn par_map<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    let run = || (0..n).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
    match thread_cap()? {
        None => run(),
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| invalid("SUBDIFF_THREADS", e.to_string()))?
            .install(run),
    }
}

/// Evaluates `f(i, rng_i)` for `i in 0..n` in parallel and returns the results
/// in index order.
pub fn par_map_paths<T, F>(seed: u64, n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut ChaCha8Rng) -> Result<T> + Sync,
{
    par_map(n, |i| f(i, &mut path_rng(seed, i as u64)))
}
