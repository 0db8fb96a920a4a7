//! Special functions: Gamma, the normal CDF, `E_alpha(-x)`, the M-Wright
//! density `F_alpha`, the inverse-subordinator density and an Airy oracle.
//!
//! Everything here is a pure function of its arguments.

mod airy;
mod gamma;
mod mittag_leffler;
mod normal;
pub(crate) mod series;
mod wright;

pub use airy::airy_ai;
pub use gamma::{gamma, ln_gamma, recip_gamma, sin_pi};
pub use mittag_leffler::{mittag_leffler_integral, mittag_leffler_neg, mittag_leffler_neg_with, mittag_leffler_series};
pub use normal::probability_integral;
pub use series::CompensatedSum;
pub use wright::{
    f_alpha, f_alpha_asymptotic, f_alpha_derivative, f_alpha_integral, f_alpha_mode, f_alpha_series,
    inverse_subordinator_density, kanter_function, tail_mass_bound, truncation_point, AsymptoticForm, SeriesOutcome,
};

use crate::error::{invalid, Result};

/// Stability index of the subordinator, `0 < alpha <= 1`.
///
/// `alpha = 1` is the memoryless boundary case where the subordinator is the
/// identity clock.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaIndex(f64);

impl AlphaIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(Self(alpha))
        } else {
            Err(invalid("alpha", format!("{alpha} is outside (0, 1]")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for AlphaIndex {
    type Error = crate::error::Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

/// Controls for the series / integral regime split in [`f_alpha`] and
/// [`mittag_leffler_neg_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Absolute accuracy target for the alternating series. The series is
    /// only trusted while its largest term keeps rounding error below this.
    pub series_tol: f64,
    pub max_terms: usize,
    /// Arguments above this always use the integral representation.
    pub regime_switch_z: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            series_tol: 1e-12,
            max_terms: 500,
            regime_switch_z: 5.0,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0) {
            return Err(invalid("series_tol", "must be > 0"));
        }
        if self.max_terms == 0 {
            return Err(invalid("max_terms", "must be >= 1"));
        }
        if !(self.regime_switch_z > 0.0) {
            return Err(invalid("regime_switch_z", "must be > 0"));
        }
        Ok(())
    }

    /// Largest series term magnitude for which rounding stays below `series_tol`.
    pub(crate) fn term_cap(&self) -> f64 {
        self.series_tol / (1000.0 * f64::EPSILON)
    }
}
