//! Approximate-likelihood inference diagnostics.
//!
//! The crate is split into three layers:
//!
//! - [`inference`]: model-agnostic machinery. Likelihood surfaces, numerical
//!   derivatives, maximization, score/information error diagnostics, test
//!   statistics, likelihood-ratio intervals, grid posteriors, total variation
//!   distance and the Godambe sandwich.
//! - [`twolevel`]: the binomial-logit model with a Gaussian random effect per
//!   item, with likelihoods by adaptive Gauss-Hermite quadrature and by a
//!   Laplace approximation.
//! - [`ising`]: the 2-D Ising model with exact normalizing constants (brute
//!   force, transfer matrix, Kaufman's closed form) and reduced dependence
//!   approximations.

pub mod error;
pub mod inference;
pub mod ising;
pub mod numeric;
pub mod rng;
pub mod twolevel;

pub use error::{Error, Result};
