use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
///
/// Numerical failures always carry the tolerance that was actually achieved so
/// callers (and the CLI) can report it instead of returning a silent number.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("gamma function pole at z = {0}")]
    Pole(f64),

    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{what}: series did not reach tolerance {tol:e} within {terms} terms (last term {last_term:e})")]
    SeriesNonConvergence {
        what: &'static str,
        terms: usize,
        last_term: f64,
        tol: f64,
    },

    #[error(
        "quadrature did not converge: estimate {value}, achieved error {achieved:e} > requested {requested:e} after {subdivisions} subdivisions"
    )]
    Quadrature {
        value: f64,
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    #[error("path budget exhausted: T(tau) stayed below level {level} after {steps} steps")]
    PathBudget { level: f64, steps: usize },

    #[error("explicit scheme unstable: dt = {dt:e} exceeds the admissible step {admissible:e}")]
    Instability { dt: f64, admissible: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
