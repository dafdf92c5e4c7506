//! Finite mixture model fitting with Boltzmann-exploration
//! expectation-maximisation.
//!
//! The [`engine`] module drives temperature-annealed stochastic hard
//! assignment over any base distribution implementing
//! [`engine::BaseModel`]. Concrete base models (multivariate Gaussian,
//! Gaussian-emission HMM, Gaussian process regressor) live in [`models`],
//! classical EM baselines and initialisers in [`baselines`], external
//! clustering metrics in [`metrics`], and seeded dataset generators and
//! loaders in [`datagen`].

pub mod baselines;
pub mod datagen;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod models;

mod numeric;

/// A fixed-dimension observation vector.
pub type Point = Vec<f64>;

/// A variable-length sequence of observation vectors.
pub type Sequence = Vec<Point>;
