//! Concrete base distributions: multivariate Gaussian, Gaussian-emission
//! hidden Markov model, and Gaussian process regressor. Each implements
//! [`crate::engine::BaseModel`] for its observation type.

mod gaussian;
mod gp;
mod hmm;

pub use gaussian::Gaussian;
pub use gp::{GpObservation, GpRegressor, KernelFamily, KernelSpec};
pub use hmm::{block_hmm, block_transition, BaumWelchRun, GaussianHmm};

/// Default regularization added to fitted covariance diagonals.
pub const DEFAULT_JITTER: f64 = 1e-6;

/// Default floor on HMM emission variances.
pub const DEFAULT_VAR_FLOOR: f64 = 1e-6;
