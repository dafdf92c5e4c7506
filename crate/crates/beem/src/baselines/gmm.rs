//! Standard (soft-responsibility) EM for Gaussian mixtures, restart-EM,
//! and deterministic-annealing EM. DAEM shares the E/M-step code with
//! plain EM so that a `[1.0]` schedule reproduces the EM trajectory
//! iterate for iterate.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::{complete_data_loglik, FitReport};
use crate::error::BaselineError;
use crate::models::{Gaussian, DEFAULT_JITTER};
use crate::numeric::logsumexp;
use crate::Point;

use super::kmeans::{kmeans_best_of, KmeansInit};

/// Initialisation scheme for the mixture parameters.
#[derive(Debug, Clone)]
pub enum GmmInit {
    /// Means drawn from the observations, covariance from the data's
    /// per-dimension variance (init A).
    RandomObservations,
    /// Per-cluster Gaussians from a k-means segmentation (init B).
    KMeans,
    /// Caller-supplied components with uniform starting weights.
    Provided(Vec<Gaussian>),
}

/// Configuration of one EM run.
#[derive(Debug, Clone)]
pub struct EmConfig {
    pub max_iters: usize,
    /// Per-observation (mean) log-likelihood improvement below which EM
    /// stops.
    pub tol: f64,
    pub init: GmmInit,
    pub jitter: f64,
    pub seed: u64,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self {
            max_iters: 500,
            tol: 1e-2,
            init: GmmInit::RandomObservations,
            jitter: DEFAULT_JITTER,
            seed: 0,
        }
    }
}

impl EmConfig {
    fn validate(&self) -> Result<(), BaselineError> {
        if self.max_iters == 0 {
            return Err(BaselineError::InvalidConfig("max_iters must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(BaselineError::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// Deterministic-annealing EM configuration.
#[derive(Debug, Clone)]
pub struct DaemConfig {
    /// Strictly increasing inverse-temperature schedule in (0, 1],
    /// ending at exactly 1.0.
    pub beta_schedule: Vec<f64>,
    /// Fixed EM iterations run at each beta below 1.
    pub inner_iters: usize,
    /// Per-observation convergence tolerance of the final beta = 1 phase.
    pub final_tol: f64,
    pub final_max_iters: usize,
    pub jitter: f64,
}

impl Default for DaemConfig {
    fn default() -> Self {
        Self {
            beta_schedule: vec![0.1, 0.2, 0.4, 0.6, 0.8, 1.0],
            inner_iters: 15,
            final_tol: 1e-2,
            final_max_iters: 500,
            jitter: DEFAULT_JITTER,
        }
    }
}

impl DaemConfig {
    fn validate(&self) -> Result<(), BaselineError> {
        if self.beta_schedule.is_empty() {
            return Err(BaselineError::InvalidConfig("empty beta schedule".into()));
        }
        for w in self.beta_schedule.windows(2) {
            if w[1] <= w[0] {
                return Err(BaselineError::InvalidConfig(
                    "beta schedule must be strictly increasing".into(),
                ));
            }
        }
        let first = self.beta_schedule[0];
        let last = *self.beta_schedule.last().unwrap();
        if !(first > 0.0) || last != 1.0 {
            return Err(BaselineError::InvalidConfig(
                "beta schedule must lie in (0, 1] and end at 1.0".into(),
            ));
        }
        if self.inner_iters == 0 {
            return Err(BaselineError::InvalidConfig("inner_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// Result of a GMM fit: traces plus the fitted components and weights.
#[derive(Debug, Clone)]
pub struct GmmFit {
    pub report: FitReport,
    pub models: Vec<Gaussian>,
    pub weights: Vec<f64>,
}

/// Init A: means drawn (distinct) from the observations, shared diagonal
/// covariance from the data's per-dimension variance.
pub fn random_obs_gaussian_init(
    data: &[Point],
    k: usize,
    jitter: f64,
    seed: u64,
) -> Result<Vec<Gaussian>, BaselineError> {
    if data.len() < k || k == 0 {
        return Err(BaselineError::TooFewObservations { n: data.len(), k });
    }
    let dim = data[0].len();
    let n = data.len() as f64;
    let mut mean = vec![0.0; dim];
    for p in data {
        for (j, &v) in p.iter().enumerate() {
            mean[j] += v;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut var = vec![0.0; dim];
    for p in data {
        for (j, &v) in p.iter().enumerate() {
            var[j] += (v - mean[j]) * (v - mean[j]);
        }
    }
    let mut cov = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        cov[(j, j)] = var[j] / n + jitter;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng);
    let mut components = Vec::with_capacity(k);
    for idx in order {
        let candidate = &data[idx];
        if components
            .iter()
            .any(|g: &Gaussian| g.mean().iter().zip(candidate).all(|(a, b)| a == b))
        {
            continue;
        }
        components.push(Gaussian::with_jitter(
            DVector::from_column_slice(candidate),
            cov.clone(),
            jitter,
        )?);
        if components.len() == k {
            return Ok(components);
        }
    }
    Err(BaselineError::TooFewDistinctPoints { k })
}

/// Init B: k-means++ segmentation (best of ten attempts), then
/// per-cluster MLE Gaussians.
pub fn kmeans_gaussian_init(
    data: &[Point],
    k: usize,
    seed: u64,
) -> Result<Vec<Gaussian>, BaselineError> {
    Ok(kmeans_components(data, k, seed)?.0)
}

fn kmeans_components(
    data: &[Point],
    k: usize,
    seed: u64,
) -> Result<(Vec<Gaussian>, Vec<usize>), BaselineError> {
    let result = kmeans_best_of(data, k, KmeansInit::PlusPlus, 100, seed, 10)?;
    let mut components = Vec::with_capacity(k);
    for ci in 0..k {
        let members: Vec<&Point> = data
            .iter()
            .zip(&result.labels)
            .filter(|(_, &l)| l == ci)
            .map(|(p, _)| p)
            .collect();
        components.push(Gaussian::mle_fit(&members, DEFAULT_JITTER)?);
    }
    Ok((components, result.labels))
}

struct Phase {
    beta: f64,
    max_iters: usize,
    /// `Some`: stop once the observed-data log-likelihood improves by less
    /// than this; `None`: always run the full iteration budget.
    tol: Option<f64>,
}

/// Tempered E-step. Responsibilities are proportional to
/// `[p(x|k) * w_k]^beta`, normalized in the log domain; the returned
/// log-likelihood is always the beta = 1 observed-data value.
fn estep(
    data: &[Point],
    models: &[Gaussian],
    log_weights: &[f64],
    beta: f64,
) -> (Vec<Vec<f64>>, f64) {
    let k = models.len();
    let mut resp = Vec::with_capacity(data.len());
    let mut loglik = 0.0;
    let mut scores = vec![0.0; k];
    for x in data {
        for (ci, model) in models.iter().enumerate() {
            scores[ci] = log_weights[ci] + model.log_pdf(x);
        }
        loglik += logsumexp(&scores);
        let tempered: Vec<f64> = scores.iter().map(|s| s * beta).collect();
        let norm = logsumexp(&tempered);
        resp.push(tempered.iter().map(|s| (s - norm).exp()).collect());
    }
    (resp, loglik)
}

/// Responsibility-weighted M-step. Covariances are jittered only when the
/// clean MLE update fails to factorize; components whose soft count
/// collapses keep their previous parameters.
fn mstep(
    data: &[Point],
    resp: &[Vec<f64>],
    models: &mut [Gaussian],
    weights: &mut [f64],
    jitter: f64,
) -> Result<(), BaselineError> {
    let n = data.len() as f64;
    let dim = data[0].len();
    let k = models.len();
    for ci in 0..k {
        let nk: f64 = resp.iter().map(|r| r[ci]).sum();
        weights[ci] = nk / n;
        if nk < 1e-10 {
            continue;
        }
        let mut mean = DVector::zeros(dim);
        for (x, r) in data.iter().zip(resp) {
            for j in 0..dim {
                mean[j] += r[ci] * x[j];
            }
        }
        mean /= nk;
        let mut cov = DMatrix::zeros(dim, dim);
        for (x, r) in data.iter().zip(resp) {
            for a in 0..dim {
                let da = x[a] - mean[a];
                for b in a..dim {
                    cov[(a, b)] += r[ci] * da * (x[b] - mean[b]);
                }
            }
        }
        cov /= nk;
        for a in 0..dim {
            for b in (a + 1)..dim {
                cov[(b, a)] = cov[(a, b)];
            }
        }
        let mut bump = 0.0;
        let fitted = loop {
            match Gaussian::with_jitter(mean.clone(), cov.clone(), jitter) {
                Ok(g) => break Some(g),
                Err(_) => {
                    bump = if bump == 0.0 { jitter } else { bump * 10.0 };
                    if bump > 1.0 {
                        break None;
                    }
                    for a in 0..dim {
                        cov[(a, a)] += bump;
                    }
                }
            }
        };
        match fitted {
            Some(g) => models[ci] = g,
            None => return Err(crate::error::ModelError::NotPositiveDefinite.into()),
        }
    }
    // Guard against drift in the weight simplex.
    let total: f64 = weights.iter().sum();
    if total > 0.0 {
        for w in weights.iter_mut() {
            *w /= total;
        }
    }
    Ok(())
}

fn argmax_labels(resp: &[Vec<f64>]) -> Vec<usize> {
    resp.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0)
        })
        .collect()
}

fn counts_from_labels(labels: &[usize], k: usize) -> Vec<usize> {
    let mut counts = vec![0usize; k];
    for &l in labels {
        counts[l] += 1;
    }
    counts
}

fn run_phases(
    data: &[Point],
    mut models: Vec<Gaussian>,
    mut weights: Vec<f64>,
    phases: &[Phase],
    jitter: f64,
) -> Result<GmmFit, BaselineError> {
    let k = models.len();
    let mut report = FitReport {
        labels: Vec::new(),
        loglik_trace: Vec::new(),
        size_trace: Vec::new(),
        temp_trace: Vec::new(),
        label_trace: Vec::new(),
        em_steps: 0,
        converged: false,
        weights: None,
    };
    let mut last_labels = vec![0usize; data.len()];

    for phase in phases {
        let mut prev_ll = f64::NEG_INFINITY;
        for iter in 0..phase.max_iters {
            let log_weights: Vec<f64> = weights.iter().map(|w| w.ln()).collect();
            let (resp, loglik) = estep(data, &models, &log_weights, phase.beta);
            last_labels = argmax_labels(&resp);
            report.loglik_trace.push(loglik);
            report.size_trace.push(counts_from_labels(&last_labels, k));
            report.temp_trace.push(phase.beta);
            report.label_trace.push(last_labels.clone());

            if let Some(tol) = phase.tol {
                if iter > 0 && (loglik - prev_ll) / (data.len() as f64) < tol {
                    report.converged = true;
                    break;
                }
            }
            prev_ll = loglik;
            mstep(data, &resp, &mut models, &mut weights, jitter)?;
        }
    }

    report.em_steps = report.loglik_trace.len();
    report.labels = last_labels;
    report.weights = Some(weights.clone());
    Ok(GmmFit {
        report,
        models,
        weights,
    })
}

fn initial_components(
    data: &[Point],
    k: usize,
    init: &GmmInit,
    jitter: f64,
    seed: u64,
) -> Result<(Vec<Gaussian>, Vec<f64>), BaselineError> {
    let (models, weights) = match init {
        GmmInit::RandomObservations => (
            random_obs_gaussian_init(data, k, jitter, seed)?,
            vec![1.0 / k as f64; k],
        ),
        GmmInit::KMeans => {
            let (models, labels) = kmeans_components(data, k, seed)?;
            let counts = counts_from_labels(&labels, k);
            let weights = counts
                .iter()
                .map(|&c| c as f64 / data.len() as f64)
                .collect();
            (models, weights)
        }
        GmmInit::Provided(models) => {
            if models.len() != k {
                return Err(BaselineError::InvalidConfig(format!(
                    "provided {} components for k = {k}",
                    models.len()
                )));
            }
            (models.clone(), vec![1.0 / k as f64; k])
        }
    };
    Ok((models, weights))
}

/// Standard EM for a k-component Gaussian mixture: soft responsibilities
/// with learned mixing weights, responsibility-weighted M-step, labels
/// from the final argmax responsibilities. The observed-data
/// log-likelihood trace is non-decreasing.
pub fn em_fit_gmm(data: &[Point], k: usize, config: &EmConfig) -> Result<GmmFit, BaselineError> {
    config.validate()?;
    if data.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    if data.len() < k || k == 0 {
        return Err(BaselineError::TooFewObservations { n: data.len(), k });
    }
    let (models, weights) = initial_components(data, k, &config.init, config.jitter, config.seed)?;
    run_phases(
        data,
        models,
        weights,
        &[Phase {
            beta: 1.0,
            max_iters: config.max_iters,
            tol: Some(config.tol),
        }],
        config.jitter,
    )
}

/// Independent EM runs with seeds `config.seed + r`; returns the run with
/// the highest complete-data log-likelihood. The returned report keeps
/// the winning run's traces but counts EM steps across all restarts, and
/// the winner does not depend on restart ordering (ties break toward the
/// lowest restart index).
pub fn em_restarts(
    data: &[Point],
    k: usize,
    restarts: usize,
    config: &EmConfig,
) -> Result<GmmFit, BaselineError> {
    if restarts == 0 {
        return Err(BaselineError::InvalidConfig("restarts must be >= 1".into()));
    }
    let mut runs: Vec<(f64, GmmFit)> = Vec::with_capacity(restarts);
    let mut total_steps = 0usize;
    for r in 0..restarts {
        let run_config = EmConfig {
            seed: config.seed + r as u64,
            init: config.init.clone(),
            ..*config
        };
        let fit = em_fit_gmm(data, k, &run_config)?;
        total_steps += fit.report.em_steps;
        let cll = complete_data_loglik(data, &fit.models)?;
        runs.push((cll, fit));
    }
    let best_index = runs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let mut best = runs.swap_remove(best_index).1;
    best.report.em_steps = total_steps;
    Ok(best)
}

/// Deterministic-annealing EM: run `inner_iters` tempered EM steps at
/// every beta below one, then a standard EM phase at beta = 1.
pub fn daem_fit_gmm(
    data: &[Point],
    k: usize,
    config: &DaemConfig,
    init: &GmmInit,
    seed: u64,
) -> Result<GmmFit, BaselineError> {
    config.validate()?;
    if data.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    if data.len() < k || k == 0 {
        return Err(BaselineError::TooFewObservations { n: data.len(), k });
    }
    let (models, weights) = initial_components(data, k, init, config.jitter, seed)?;
    let mut phases: Vec<Phase> = config
        .beta_schedule
        .iter()
        .filter(|&&beta| beta < 1.0)
        .map(|&beta| Phase {
            beta,
            max_iters: config.inner_iters,
            tol: None,
        })
        .collect();
    phases.push(Phase {
        beta: 1.0,
        max_iters: config.final_max_iters,
        tol: Some(config.final_tol),
    });
    run_phases(data, models, weights, &phases, config.jitter)
}
