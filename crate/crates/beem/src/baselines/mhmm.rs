//! EM baseline for mixtures of HMMs and the per-sequence similarity
//! initialisation.
//!
//! The mixture is trained as a single HMM over the union state space with
//! a block-diagonal transition matrix: Baum-Welch preserves the zero
//! off-block entries, the initial distribution carries the mixing mass,
//! and a sequence's component posterior is the forward mass of its block.

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::FitReport;
use crate::error::BaselineError;
use crate::models::{block_hmm, GaussianHmm};
use crate::numeric::logsumexp;
use crate::Sequence;

use super::kmeans::{kmeans, kmeans_best_of, KmeansInit};

/// Configuration of the block-diagonal EM baseline.
#[derive(Debug, Clone)]
pub struct MhmmEmConfig {
    pub max_iters: usize,
    /// Per-sequence (mean) log-likelihood improvement below which EM
    /// stops.
    pub tol: f64,
}

impl Default for MhmmEmConfig {
    fn default() -> Self {
        Self {
            max_iters: 100,
            tol: 3e-2,
        }
    }
}

/// Result of one mixture-of-HMMs EM fit.
#[derive(Debug, Clone)]
pub struct MhmmFit {
    pub report: FitReport,
    /// The trained union-state-space HMM.
    pub block: GaussianHmm,
    /// States per component, in block order.
    pub block_sizes: Vec<usize>,
}

/// K random-initialised HMM components sharing the pooled frame
/// statistics of the corpus.
pub fn random_hmm_components(
    seqs: &[Sequence],
    k: usize,
    n_states: usize,
    seed: u64,
) -> Result<Vec<GaussianHmm>, BaselineError> {
    if seqs.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    let frames: Vec<&[f64]> = seqs.iter().flatten().map(|f| f.as_slice()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = Vec::with_capacity(k);
    for _ in 0..k {
        components.push(GaussianHmm::random_init(n_states, &frames, &mut rng)?);
    }
    Ok(components)
}

/// K HMM components with the common frame-space initialisation: emission
/// means at k-means centers of the pooled frames with a shared isotropic
/// emission variance, initial and transition rows Dirichlet-random per
/// component. This is the random-dynamics init used for mixture fitting
/// (every component shares the emission structure; only the dynamics
/// differ).
pub fn kmeans_hmm_components(
    seqs: &[Sequence],
    k: usize,
    n_states: usize,
    emission_var: f64,
    seed: u64,
) -> Result<Vec<GaussianHmm>, BaselineError> {
    use nalgebra::{DMatrix, DVector};
    if seqs.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    if !(emission_var > 0.0) {
        return Err(BaselineError::InvalidConfig(format!(
            "emission_var must be positive, got {emission_var}"
        )));
    }
    let frames: Vec<Vec<f64>> = seqs.iter().flatten().cloned().collect();
    let dim = frames[0].len();
    let km = kmeans_best_of(&frames, n_states, KmeansInit::PlusPlus, 50, seed, 5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut components = Vec::with_capacity(k);
    for _ in 0..k {
        let initial = DVector::from_vec(dirichlet_row(n_states, &mut rng));
        let mut transition = DMatrix::zeros(n_states, n_states);
        for r in 0..n_states {
            let row = dirichlet_row(n_states, &mut rng);
            for (c, v) in row.into_iter().enumerate() {
                transition[(r, c)] = v;
            }
        }
        let means = DMatrix::from_fn(n_states, dim, |r, c| km.centers[r][c]);
        let vars = DMatrix::from_element(n_states, dim, emission_var);
        components.push(GaussianHmm::new(initial, transition, means, vars)?);
    }
    Ok(components)
}

fn dirichlet_row<R: rand::Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = row.iter().sum();
    for v in &mut row {
        *v /= total;
    }
    row
}

fn classify_and_loglik(
    block: &GaussianHmm,
    seqs: &[Sequence],
    block_sizes: &[usize],
) -> Result<(Vec<usize>, f64), BaselineError> {
    let mut labels = Vec::with_capacity(seqs.len());
    let mut total = 0.0;
    for seq in seqs {
        let finals = block.forward_final_state_logliks(seq)?;
        let mut offset = 0;
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0;
        let mut per_block = Vec::with_capacity(block_sizes.len());
        for (ci, &size) in block_sizes.iter().enumerate() {
            let mass = logsumexp(&finals[offset..offset + size]);
            per_block.push(mass);
            if mass > best {
                best = mass;
                arg = ci;
            }
            offset += size;
        }
        labels.push(arg);
        total += logsumexp(&per_block);
    }
    Ok((labels, total))
}

/// Standard EM for a mixture of HMMs, starting from the given components
/// with uniform mixing. Labels are per-sequence block posteriors; the
/// log-likelihood trace is the observed-data mixture likelihood and is
/// non-decreasing.
pub fn em_fit_mhmm(
    seqs: &[Sequence],
    components: Vec<GaussianHmm>,
    config: &MhmmEmConfig,
) -> Result<MhmmFit, BaselineError> {
    if seqs.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    let k = components.len();
    if k == 0 || seqs.len() < k {
        return Err(BaselineError::TooFewObservations { n: seqs.len(), k });
    }
    let block_sizes: Vec<usize> = components.iter().map(GaussianHmm::n_states).collect();
    let mixing = vec![1.0 / k as f64; k];
    let mut block = block_hmm(&components, &mixing)?;
    let refs: Vec<&Sequence> = seqs.iter().collect();

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

    let mut prev_ll = f64::NEG_INFINITY;
    for iter in 0..config.max_iters {
        let (labels, loglik) = classify_and_loglik(&block, seqs, &block_sizes)?;
        let mut sizes = vec![0usize; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        report.loglik_trace.push(loglik);
        report.size_trace.push(sizes);
        report.temp_trace.push(1.0);
        report.label_trace.push(labels);

        if iter > 0 && (loglik - prev_ll) / (seqs.len() as f64) < config.tol {
            report.converged = true;
            break;
        }
        prev_ll = loglik;
        block.baum_welch(&refs, 1, f64::NEG_INFINITY)?;
    }

    report.em_steps = report.loglik_trace.len();
    let (labels, _) = classify_and_loglik(&block, seqs, &block_sizes)?;
    report.labels = labels;
    // Mixing mass per component is the initial-distribution mass of its block.
    let mut weights = Vec::with_capacity(k);
    let mut offset = 0;
    for &size in &block_sizes {
        weights.push(block.initial().rows(offset, size).sum());
        offset += size;
    }
    report.weights = Some(weights);

    Ok(MhmmFit {
        report,
        block,
        block_sizes,
    })
}

/// Symmetrized cross log-likelihood matrix: fit one HMM per sequence with
/// a short Baum-Welch budget, score every sequence under every model, and
/// average with the transpose. Sequences shorter than two steps are
/// excluded; the returned indices map matrix rows back to `seqs`.
pub fn smyth_similarity(
    seqs: &[Sequence],
    n_states: usize,
    budget: usize,
    seed: u64,
) -> Result<(Vec<Vec<f64>>, Vec<usize>), BaselineError> {
    let usable: Vec<usize> = (0..seqs.len()).filter(|&i| seqs[i].len() >= 2).collect();
    let skipped = seqs.len() - usable.len();
    if skipped > 0 {
        warn!("excluding {skipped} sequences shorter than 2 steps from per-sequence fitting");
    }
    if usable.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut models = Vec::with_capacity(usable.len());
    for &i in &usable {
        let frames: Vec<&[f64]> = seqs[i].iter().map(|f| f.as_slice()).collect();
        let mut model = GaussianHmm::random_init(n_states, &frames, &mut rng)?;
        model.baum_welch(&[&seqs[i]], budget, 1e-4)?;
        models.push(model);
    }
    let m = usable.len();
    let mut sim = vec![vec![0.0; m]; m];
    for (a, model) in models.iter().enumerate() {
        for (b, &j) in usable.iter().enumerate() {
            sim[a][b] = model.forward_loglik(&seqs[j])?;
        }
    }
    for a in 0..m {
        for b in (a + 1)..m {
            let v = 0.5 * (sim[a][b] + sim[b][a]);
            sim[a][b] = v;
            sim[b][a] = v;
        }
    }
    Ok((sim, usable))
}

/// Sequence-similarity initialisation: cluster the rows of the
/// symmetrized cross log-likelihood matrix with k-means and fit one HMM
/// per group as the mixture's starting parameters.
pub fn smyth_init(
    seqs: &[Sequence],
    k: usize,
    n_states: usize,
    budget: usize,
    seed: u64,
) -> Result<Vec<GaussianHmm>, BaselineError> {
    let (sim, usable) = smyth_similarity(seqs, n_states, budget, seed)?;
    if usable.len() < k {
        return Err(BaselineError::TooFewObservations {
            n: usable.len(),
            k,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let clustering = kmeans(&sim, k, KmeansInit::PlusPlus, 100, rng.gen())?;

    let mut components = Vec::with_capacity(k);
    for ci in 0..k {
        let member_seqs: Vec<&Sequence> = clustering
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == ci)
            .map(|(row, _)| &seqs[usable[row]])
            .collect();
        let frames: Vec<&[f64]> = member_seqs
            .iter()
            .flat_map(|s| s.iter())
            .map(|f| f.as_slice())
            .collect();
        let mut model = GaussianHmm::random_init(n_states, &frames, &mut rng)?;
        model.baum_welch(&member_seqs, budget, 1e-4)?;
        components.push(model);
    }
    Ok(components)
}
