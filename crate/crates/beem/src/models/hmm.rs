//! Gaussian-emission hidden Markov model with diagonal state covariances.
//!
//! Sequence likelihood uses the forward algorithm in the log domain with a
//! log-sum-exp at every step; parameter fitting is multi-sequence
//! Baum-Welch, accumulating expected counts across sequences before each
//! M-step. Zero entries in the transition matrix stay zero under
//! Baum-Welch, which is what makes the block-diagonal mixture-of-HMMs
//! construction work.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::engine::BaseModel;
use crate::error::ModelError;
use crate::numeric::logsumexp;
use crate::Sequence;

use super::DEFAULT_VAR_FLOOR;

const LN_2PI: f64 = 1.8378770664093453;
const ROW_SUM_TOL: f64 = 1e-9;

/// Hidden Markov model with per-state diagonal Gaussian emissions.
#[derive(Debug, Clone)]
pub struct GaussianHmm {
    initial: DVector<f64>,
    transition: DMatrix<f64>,
    emission_means: DMatrix<f64>,
    emission_vars: DMatrix<f64>,
    var_floor: f64,
    fit_max_iters: usize,
    fit_tol: f64,
}

/// Trace of one Baum-Welch run.
#[derive(Debug, Clone)]
pub struct BaumWelchRun {
    /// Number of M-steps applied.
    pub iterations: usize,
    /// Total forward log-likelihood over all sequences, evaluated before
    /// each M-step; non-decreasing by EM theory.
    pub loglik_trace: Vec<f64>,
}

struct BwStats {
    init: Vec<f64>,
    trans_num: DMatrix<f64>,
    trans_den: Vec<f64>,
    gamma_sum: Vec<f64>,
    weighted_x: DMatrix<f64>,
    weighted_x2: DMatrix<f64>,
}

impl GaussianHmm {
    pub fn new(
        initial: DVector<f64>,
        transition: DMatrix<f64>,
        emission_means: DMatrix<f64>,
        emission_vars: DMatrix<f64>,
    ) -> Result<Self, ModelError> {
        let s = initial.len();
        if s == 0 {
            return Err(ModelError::InvalidParameter("no hidden states".into()));
        }
        if transition.nrows() != s || transition.ncols() != s {
            return Err(ModelError::DimensionMismatch {
                expected: s,
                got: transition.nrows(),
            });
        }
        if emission_means.nrows() != s || emission_vars.nrows() != s {
            return Err(ModelError::DimensionMismatch {
                expected: s,
                got: emission_means.nrows(),
            });
        }
        if emission_means.ncols() != emission_vars.ncols() {
            return Err(ModelError::DimensionMismatch {
                expected: emission_means.ncols(),
                got: emission_vars.ncols(),
            });
        }
        if (initial.sum() - 1.0).abs() > ROW_SUM_TOL || initial.iter().any(|&p| p < 0.0) {
            return Err(ModelError::InvalidParameter(
                "initial distribution must be a probability vector".into(),
            ));
        }
        for r in 0..s {
            let row_sum: f64 = transition.row(r).iter().sum();
            if (row_sum - 1.0).abs() > ROW_SUM_TOL
                || transition.row(r).iter().any(|&p| p < 0.0)
            {
                return Err(ModelError::InvalidParameter(format!(
                    "transition row {r} is not a probability vector (sum {row_sum})"
                )));
            }
        }
        if emission_vars.iter().any(|&v| !(v > 0.0)) {
            return Err(ModelError::InvalidParameter(
                "emission variances must be positive".into(),
            ));
        }
        let mut vars = emission_vars;
        for v in vars.iter_mut() {
            *v = v.max(DEFAULT_VAR_FLOOR);
        }
        Ok(Self {
            initial,
            transition,
            emission_means,
            emission_vars: vars,
            var_floor: DEFAULT_VAR_FLOOR,
            fit_max_iters: 10,
            fit_tol: 1e-4,
        })
    }

    /// Random initialisation: Dirichlet(1) rows for the initial and
    /// transition distributions, emission means drawn from the pooled
    /// frames, variances set to the pooled per-dimension variance.
    pub fn random_init<R: Rng + ?Sized>(
        n_states: usize,
        frames: &[&[f64]],
        rng: &mut R,
    ) -> Result<Self, ModelError> {
        if frames.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let dim = frames[0].len();
        let initial = DVector::from_vec(dirichlet_uniform(n_states, rng));
        // Fill transition rows one at a time so the draw order is stable.
        let mut transition = DMatrix::zeros(n_states, n_states);
        for r in 0..n_states {
            let row = dirichlet_uniform(n_states, rng);
            for (c, v) in row.into_iter().enumerate() {
                transition[(r, c)] = v;
            }
        }

        let mut pooled_mean = vec![0.0; dim];
        for f in frames {
            for (j, &v) in f.iter().enumerate() {
                pooled_mean[j] += v;
            }
        }
        for m in &mut pooled_mean {
            *m /= frames.len() as f64;
        }
        let mut pooled_var = vec![0.0; dim];
        for f in frames {
            for (j, &v) in f.iter().enumerate() {
                let d = v - pooled_mean[j];
                pooled_var[j] += d * d;
            }
        }
        for v in &mut pooled_var {
            *v = (*v / frames.len() as f64).max(DEFAULT_VAR_FLOOR);
        }

        let mut means = DMatrix::zeros(n_states, dim);
        let mut vars = DMatrix::zeros(n_states, dim);
        for s in 0..n_states {
            let pick = frames[rng.gen_range(0..frames.len())];
            for j in 0..dim {
                means[(s, j)] = pick[j];
                vars[(s, j)] = pooled_var[j];
            }
        }
        Self::new(initial, transition, means, vars)
    }

    /// Override the Baum-Welch budget used when the engine refits this
    /// component as a mixture member.
    pub fn with_fit_budget(mut self, max_iters: usize, tol: f64) -> Self {
        self.fit_max_iters = max_iters;
        self.fit_tol = tol;
        self
    }

    /// Override the emission-variance floor applied at every M-step.
    pub fn with_var_floor(mut self, floor: f64) -> Self {
        self.var_floor = floor;
        for v in self.emission_vars.iter_mut() {
            *v = v.max(floor);
        }
        self
    }

    pub fn n_states(&self) -> usize {
        self.initial.len()
    }

    pub fn dim(&self) -> usize {
        self.emission_means.ncols()
    }

    pub fn initial(&self) -> &DVector<f64> {
        &self.initial
    }

    pub fn transition(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn emission_means(&self) -> &DMatrix<f64> {
        &self.emission_means
    }

    pub fn emission_vars(&self) -> &DMatrix<f64> {
        &self.emission_vars
    }

    fn emission_loglik(&self, state: usize, x: &[f64]) -> f64 {
        let mut ll = 0.0;
        for (j, &v) in x.iter().enumerate() {
            let var = self.emission_vars[(state, j)];
            let d = v - self.emission_means[(state, j)];
            ll += -0.5 * (LN_2PI + var.ln() + d * d / var);
        }
        ll
    }

    fn emission_matrix(&self, seq: &Sequence) -> Result<DMatrix<f64>, ModelError> {
        let s = self.n_states();
        let dim = self.dim();
        let mut out = DMatrix::zeros(seq.len(), s);
        for (t, x) in seq.iter().enumerate() {
            if x.len() != dim {
                return Err(ModelError::DimensionMismatch {
                    expected: dim,
                    got: x.len(),
                });
            }
            for state in 0..s {
                out[(t, state)] = self.emission_loglik(state, x);
            }
        }
        Ok(out)
    }

    /// Log forward variables at the final step, one per state. The total
    /// sequence log-likelihood is their log-sum-exp; with a block-diagonal
    /// transition matrix, per-block log-sum-exp gives per-component
    /// posterior mass.
    pub fn forward_final_state_logliks(&self, seq: &Sequence) -> Result<Vec<f64>, ModelError> {
        if seq.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let emit = self.emission_matrix(seq)?;
        let s = self.n_states();
        let mut alpha: Vec<f64> = (0..s)
            .map(|state| self.initial[state].ln() + emit[(0, state)])
            .collect();
        let log_trans: Vec<Vec<f64>> = (0..s)
            .map(|i| (0..s).map(|j| self.transition[(i, j)].ln()).collect())
            .collect();
        let mut scratch = vec![0.0; s];
        for t in 1..seq.len() {
            let prev = alpha.clone();
            for j in 0..s {
                for (i, scratch_i) in scratch.iter_mut().enumerate() {
                    *scratch_i = prev[i] + log_trans[i][j];
                }
                alpha[j] = logsumexp(&scratch) + emit[(t, j)];
            }
        }
        Ok(alpha)
    }

    /// Sequence log-likelihood via the forward algorithm.
    pub fn forward_loglik(&self, seq: &Sequence) -> Result<f64, ModelError> {
        Ok(logsumexp(&self.forward_final_state_logliks(seq)?))
    }

    /// Multi-sequence Baum-Welch from the current parameters. Expected
    /// counts are accumulated across all sequences before each M-step.
    /// Stops when the total log-likelihood improves by less than `tol`.
    pub fn baum_welch(
        &mut self,
        seqs: &[&Sequence],
        max_iters: usize,
        tol: f64,
    ) -> Result<BaumWelchRun, ModelError> {
        if seqs.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let mut trace = Vec::new();
        let mut iterations = 0;
        for iter in 0..max_iters {
            let (stats, total_ll) = self.accumulate_stats(seqs)?;
            trace.push(total_ll);
            if iter > 0 && total_ll - trace[iter - 1] < tol {
                break;
            }
            self.apply_mstep(&stats);
            iterations += 1;
        }
        Ok(BaumWelchRun {
            iterations,
            loglik_trace: trace,
        })
    }

    fn accumulate_stats(&self, seqs: &[&Sequence]) -> Result<(BwStats, f64), ModelError> {
        let s = self.n_states();
        let dim = self.dim();
        let mut stats = BwStats {
            init: vec![0.0; s],
            trans_num: DMatrix::zeros(s, s),
            trans_den: vec![0.0; s],
            gamma_sum: vec![0.0; s],
            weighted_x: DMatrix::zeros(s, dim),
            weighted_x2: DMatrix::zeros(s, dim),
        };
        let log_trans: Vec<Vec<f64>> = (0..s)
            .map(|i| (0..s).map(|j| self.transition[(i, j)].ln()).collect())
            .collect();
        let mut total_ll = 0.0;

        for seq in seqs {
            if seq.is_empty() {
                return Err(ModelError::EmptySubset);
            }
            let len = seq.len();
            let emit = self.emission_matrix(seq)?;

            let mut lalpha = DMatrix::zeros(len, s);
            for state in 0..s {
                lalpha[(0, state)] = self.initial[state].ln() + emit[(0, state)];
            }
            let mut scratch = vec![0.0; s];
            for t in 1..len {
                for j in 0..s {
                    for (i, scratch_i) in scratch.iter_mut().enumerate() {
                        *scratch_i = lalpha[(t - 1, i)] + log_trans[i][j];
                    }
                    lalpha[(t, j)] = logsumexp(&scratch) + emit[(t, j)];
                }
            }
            let final_row: Vec<f64> = (0..s).map(|state| lalpha[(len - 1, state)]).collect();
            let seq_ll = logsumexp(&final_row);
            total_ll += seq_ll;

            let mut lbeta = DMatrix::zeros(len, s);
            for t in (0..len.saturating_sub(1)).rev() {
                for i in 0..s {
                    for (j, scratch_j) in scratch.iter_mut().enumerate() {
                        *scratch_j = log_trans[i][j] + emit[(t + 1, j)] + lbeta[(t + 1, j)];
                    }
                    lbeta[(t, i)] = logsumexp(&scratch);
                }
            }

            for t in 0..len {
                for state in 0..s {
                    let g = (lalpha[(t, state)] + lbeta[(t, state)] - seq_ll).exp();
                    if t == 0 {
                        stats.init[state] += g;
                    }
                    if t + 1 < len {
                        stats.trans_den[state] += g;
                    }
                    stats.gamma_sum[state] += g;
                    for j in 0..dim {
                        let x = seq[t][j];
                        stats.weighted_x[(state, j)] += g * x;
                        stats.weighted_x2[(state, j)] += g * x * x;
                    }
                }
            }
            for t in 0..len.saturating_sub(1) {
                for i in 0..s {
                    for j in 0..s {
                        let lx = lalpha[(t, i)]
                            + log_trans[i][j]
                            + emit[(t + 1, j)]
                            + lbeta[(t + 1, j)]
                            - seq_ll;
                        stats.trans_num[(i, j)] += lx.exp();
                    }
                }
            }
        }
        Ok((stats, total_ll))
    }

    fn apply_mstep(&mut self, stats: &BwStats) {
        let s = self.n_states();
        let dim = self.dim();

        let init_total: f64 = stats.init.iter().sum();
        if init_total > 0.0 {
            for state in 0..s {
                self.initial[state] = stats.init[state] / init_total;
            }
        }

        for i in 0..s {
            if stats.trans_den[i] <= 0.0 {
                continue; // state never left; keep its row
            }
            let mut row_sum = 0.0;
            for j in 0..s {
                row_sum += stats.trans_num[(i, j)];
            }
            if row_sum <= 0.0 {
                continue;
            }
            for j in 0..s {
                self.transition[(i, j)] = stats.trans_num[(i, j)] / row_sum;
            }
        }

        for state in 0..s {
            let w = stats.gamma_sum[state];
            if w <= 1e-12 {
                continue; // unoccupied state keeps its emissions
            }
            for j in 0..dim {
                let mean = stats.weighted_x[(state, j)] / w;
                let var = stats.weighted_x2[(state, j)] / w - mean * mean;
                self.emission_means[(state, j)] = mean;
                self.emission_vars[(state, j)] = var.max(self.var_floor);
            }
        }
    }
}

impl BaseModel<Sequence> for GaussianHmm {
    fn log_likelihood(&self, obs: &Sequence) -> f64 {
        self.forward_loglik(obs)
            .expect("sequence dimension matches the model")
    }

    fn fit(&mut self, subset: &[&Sequence]) -> Result<(), ModelError> {
        self.baum_welch(subset, self.fit_max_iters, self.fit_tol)?;
        Ok(())
    }

    fn params(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.initial.iter().copied().collect();
        out.extend(self.transition.iter().copied());
        out.extend(self.emission_means.iter().copied());
        out.extend(self.emission_vars.iter().copied());
        out
    }
}

fn dirichlet_uniform<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    // Dirichlet(1,..,1) via normalized unit exponentials.
    let mut draws: Vec<f64> = (0..len)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = draws.iter().sum();
    for d in &mut draws {
        *d /= total;
    }
    draws
}

/// Block-diagonal transition matrix assembled from the components'
/// transition matrices; off-block entries are exactly zero.
pub fn block_transition(hmms: &[GaussianHmm]) -> DMatrix<f64> {
    let total: usize = hmms.iter().map(GaussianHmm::n_states).sum();
    let mut out = DMatrix::zeros(total, total);
    let mut offset = 0;
    for hmm in hmms {
        let s = hmm.n_states();
        for i in 0..s {
            for j in 0..s {
                out[(offset + i, offset + j)] = hmm.transition()[(i, j)];
            }
        }
        offset += s;
    }
    out
}

/// Assemble a mixture of HMMs into a single HMM over the union state
/// space: block-diagonal transitions, initial mass `mixing[k] * pi_k`
/// within block `k`, emissions stacked.
pub fn block_hmm(hmms: &[GaussianHmm], mixing: &[f64]) -> Result<GaussianHmm, ModelError> {
    if hmms.is_empty() {
        return Err(ModelError::EmptySubset);
    }
    if mixing.len() != hmms.len() {
        return Err(ModelError::DimensionMismatch {
            expected: hmms.len(),
            got: mixing.len(),
        });
    }
    let dim = hmms[0].dim();
    if hmms.iter().any(|h| h.dim() != dim) {
        return Err(ModelError::InvalidParameter(
            "all components must share the emission dimension".into(),
        ));
    }
    let total: usize = hmms.iter().map(GaussianHmm::n_states).sum();
    let transition = block_transition(hmms);
    let mut initial = DVector::zeros(total);
    let mut means = DMatrix::zeros(total, dim);
    let mut vars = DMatrix::zeros(total, dim);
    let mut offset = 0;
    for (hmm, &w) in hmms.iter().zip(mixing) {
        for i in 0..hmm.n_states() {
            initial[offset + i] = w * hmm.initial()[i];
            for j in 0..dim {
                means[(offset + i, j)] = hmm.emission_means()[(i, j)];
                vars[(offset + i, j)] = hmm.emission_vars()[(i, j)];
            }
        }
        offset += hmm.n_states();
    }
    GaussianHmm::new(initial, transition, means, vars)
}
