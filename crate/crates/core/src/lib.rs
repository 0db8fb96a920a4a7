//! Subordinated Brownian motion and option pricing on the inverse
//! alpha-stable clock.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod ffpe;
pub mod output;
pub mod pricing;
pub mod quadrature;
pub mod rng;
pub mod specfun;
pub mod stats;
pub mod subdiffusion;
pub mod subordinator;

pub use error::{Error, Result};
