//! Per-unit probability density estimation on a bounded interval.
//!
//! Each unit in a collection owns a handful of continuous observations.
//! The model explains every unit's density as a mixture of basis histograms
//! that are shared across the whole collection; each basis has its own bin
//! count and bin masses, and a unit differs from its neighbours only through
//! its mixture weights. Fitting is collapsed Gibbs sampling over the latent
//! basis assignments and the per-basis bin counts, with empirical-Bayes
//! updates of the two Dirichlet concentrations.
//!
//! Modules:
//! - [`numerics`]: special functions and the seeded [`numerics::Rng`].
//! - [`histogram`]: piecewise-constant densities on a half-open range.
//! - [`model`]: the data container, sufficient statistics, and the joint
//!   log-probability the sampler targets.
//! - [`gibbs`]: the fitting engine.
//! - [`baselines`]: single-unit bin-count selectors used for comparison.
//! - [`bench`]: synthetic-data generation and the benchmark harness.

// `!(x > 0.0)` style guards are deliberate: they reject NaN along with the
// out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep their full published digits.
#![allow(clippy::excessive_precision)]

pub mod baselines;
pub mod bench;
pub mod error;
pub mod gibbs;
pub mod histogram;
pub mod model;
pub mod numerics;

pub use error::{Error, Result};
pub use gibbs::{fit, FitConfig, FitResult};
pub use histogram::{Histogram, MixtureDensity, Range};
pub use model::Collection;
pub use numerics::Rng;
