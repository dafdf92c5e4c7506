//! Classical fitting baselines and initialisation schemes: K-means,
//! standard EM for Gaussian mixtures, restart-EM, deterministic-annealing
//! EM, sequence-similarity (per-sequence HMM) initialisation, and the
//! block-diagonal EM baseline for HMM mixtures.

mod gmm;
mod kmeans;
mod mhmm;

pub use gmm::{
    daem_fit_gmm, em_fit_gmm, em_restarts, kmeans_gaussian_init, random_obs_gaussian_init,
    DaemConfig, EmConfig, GmmFit, GmmInit,
};
pub use kmeans::{kmeans, kmeans_best_of, KmeansInit, KmeansResult};
pub use mhmm::{
    em_fit_mhmm, kmeans_hmm_components, random_hmm_components, smyth_init, smyth_similarity,
    MhmmEmConfig, MhmmFit,
};
