//! Boltzmann-exploration EM over an abstract base-model contract.
//!
//! One fitting iteration scores every observation under every component
//! (the value matrix), turns each score row into a modified responsibility
//! via a temperature-scaled softmax, samples one hard component assignment
//! per observation from that distribution, and refits each component on
//! exactly the observations it drew. The temperature follows a geometric
//! cooling schedule, so early iterations explore and late iterations
//! exploit. Fitting stops once the complete-data log-likelihood has failed
//! to improve for a configured number of steps (or, alternatively, once
//! the parameter vector stops moving).
//!
//! All densities are handled as natural logs; responsibilities are
//! normalized in the log domain.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{EngineError, ModelError};

/// Contract a mixture component must satisfy to be driven by the engine.
///
/// `fit` must be deterministic for a fixed subset (and fixed internal
/// budget), and `log_likelihood` must be finite for in-domain observations
/// (`-inf` is permitted only for genuinely zero-density inputs).
pub trait BaseModel<O>: Clone {
    /// Natural-log density of one observation under the current parameters.
    fn log_likelihood(&self, obs: &O) -> f64;

    /// Refit the parameters on a hard-assigned subset.
    fn fit(&mut self, subset: &[&O]) -> Result<(), ModelError>;

    /// Flattened parameter vector, used by the parameter-change stop rule.
    fn params(&self) -> Vec<f64>;
}

/// Mixing-weight handling during assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// Weights fixed uniform throughout the optimisation (mode I).
    UniformFixed,
    /// Weights re-estimated from cluster sizes at every M-step (mode II).
    Learned,
}

/// Termination criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Stop when the complete-data log-likelihood has not improved for
    /// `patience` iterations.
    LoglikPatience,
    /// Stop when the flattened parameter vector moves less than `epsilon`
    /// (L2) between consecutive iterations.
    ParamChange,
}

/// Engine configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BeemConfig {
    /// Initial temperature (must be positive).
    pub tau0: f64,
    /// Geometric decay factor, strictly inside (0, 1).
    pub alpha: f64,
    /// Iterations without improvement tolerated before stopping.
    pub patience: usize,
    /// Hard cap on iterations.
    pub max_iters: usize,
    /// Parameter-change threshold for [`StopRule::ParamChange`].
    pub epsilon: f64,
    pub stop_rule: StopRule,
    pub weight_mode: WeightMode,
    /// Seed of the engine's own random stream.
    pub seed: u64,
}

impl Default for BeemConfig {
    fn default() -> Self {
        Self {
            tau0: 1.5,
            alpha: 0.97,
            patience: 10,
            max_iters: 500,
            epsilon: 1e-4,
            stop_rule: StopRule::LoglikPatience,
            weight_mode: WeightMode::UniformFixed,
            seed: 0,
        }
    }
}

impl BeemConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        if !(self.tau0 > 0.0 && self.tau0.is_finite()) {
            return Err(EngineError::InvalidConfig(format!(
                "tau0 must be positive, got {}",
                self.tau0
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(EngineError::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.patience == 0 {
            return Err(EngineError::InvalidConfig("patience must be >= 1".into()));
        }
        if self.max_iters == 0 {
            return Err(EngineError::InvalidConfig("max_iters must be >= 1".into()));
        }
        if !(self.epsilon >= 0.0) {
            return Err(EngineError::InvalidConfig(format!(
                "epsilon must be nonnegative, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// How the components are initialised before the first iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeemInit {
    /// Split the data into random nonempty subsets and fit each component
    /// on its subset (the default, init A).
    RandomSubsets,
    /// The supplied models are already initialised (e.g. from K-means);
    /// skip the random-partition fit.
    Warm,
}

/// Hard-assignment state carried across one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentState {
    /// Component index per observation.
    pub labels: Vec<usize>,
    /// Observation indices per component; always a partition of `0..n`.
    pub subsets: Vec<Vec<usize>>,
    pub temperature: f64,
    pub iteration: usize,
}

/// Outcome traces of one mixture fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Final hard labels (greedy argmax under the best-scoring iterate).
    pub labels: Vec<usize>,
    /// Complete-data log-likelihood after each iteration's M-step.
    pub loglik_trace: Vec<f64>,
    /// Cluster sizes per iteration; each row sums to the dataset size.
    pub size_trace: Vec<Vec<usize>>,
    /// Temperature used at each iteration.
    pub temp_trace: Vec<f64>,
    /// Sampled hard labels at each iteration.
    pub label_trace: Vec<Vec<usize>>,
    pub em_steps: usize,
    pub converged: bool,
    /// Final mixing weights (learned-weight mode only).
    pub weights: Option<Vec<f64>>,
}

/// A fit report together with the winning component parameters.
#[derive(Debug, Clone)]
pub struct BeemFit<M> {
    pub report: FitReport,
    pub models: Vec<M>,
}

/// Temperature-scaled softmax of a log-likelihood row, optionally shifted
/// by log mixing weights. Computed stably by subtracting the row maximum
/// before exponentiation; entries are nonnegative and sum to one.
pub fn modified_responsibility(
    loglik_row: &[f64],
    log_weights: Option<&[f64]>,
    tau: f64,
) -> Result<Vec<f64>, EngineError> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(EngineError::InvalidTemperature(tau));
    }
    if loglik_row.is_empty() {
        return Err(EngineError::NoComponents);
    }
    if let Some(lw) = log_weights {
        if lw.len() != loglik_row.len() {
            return Err(EngineError::InvalidConfig(format!(
                "log_weights length {} does not match row length {}",
                lw.len(),
                loglik_row.len()
            )));
        }
    }
    let mut scores = Vec::with_capacity(loglik_row.len());
    for (i, &ll) in loglik_row.iter().enumerate() {
        if ll.is_nan() || ll == f64::INFINITY {
            return Err(EngineError::InvalidLogLikelihood);
        }
        let shifted = match log_weights {
            Some(lw) => ll + lw[i],
            None => ll,
        };
        scores.push(shifted / tau);
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(EngineError::DegenerateResponsibility);
    }
    let mut out: Vec<f64> = scores.iter().map(|&s| (s - max).exp()).collect();
    let total: f64 = out.iter().sum();
    for r in &mut out {
        *r /= total;
    }
    Ok(out)
}

/// Draw one component index from a categorical distribution.
pub fn sample_assignment<R: Rng + ?Sized>(
    probs: &[f64],
    rng: &mut R,
) -> Result<usize, EngineError> {
    if probs.is_empty() {
        return Err(EngineError::NoComponents);
    }
    let mut total = 0.0;
    for &p in probs {
        if !(p >= 0.0) {
            return Err(EngineError::NegativeProbability(p));
        }
        total += p;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(EngineError::NotNormalized(total));
    }
    let u: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
        }
        acc += p;
        if u < acc {
            return Ok(i);
        }
    }
    // Unreachable in exact arithmetic; guards rounding at the tail.
    Ok(last_positive)
}

/// Temperature at iteration `t` (1-based) under geometric decay from the
/// initial temperature: `tau0 * alpha^(t-1)`.
pub fn cool(tau0: f64, t: usize, alpha: f64) -> f64 {
    assert!(t >= 1, "iteration index is 1-based");
    assert!(tau0 > 0.0, "tau0 must be positive");
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    tau0 * alpha.powi((t - 1) as i32)
}

/// Complete-data log-likelihood: the sum over observations of the best
/// per-component log density, `sum_n max_k log p(x_n | zeta_k)`.
pub fn complete_data_loglik<O, M: BaseModel<O>>(
    data: &[O],
    models: &[M],
) -> Result<f64, EngineError> {
    if data.is_empty() {
        return Err(EngineError::EmptyData);
    }
    if models.is_empty() {
        return Err(EngineError::NoComponents);
    }
    let mut total = 0.0;
    for obs in data {
        let mut best = f64::NEG_INFINITY;
        for model in models {
            let ll = model.log_likelihood(obs);
            if ll.is_nan() {
                return Err(EngineError::InvalidLogLikelihood);
            }
            if ll > best {
                best = ll;
            }
        }
        total += best;
    }
    Ok(total)
}

/// Split `0..n` into `k` random nonempty subsets (shuffle, then deal
/// round-robin). Subset contents are returned in ascending index order.
pub fn random_partition<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>, EngineError> {
    if k == 0 {
        return Err(EngineError::NoComponents);
    }
    if n < k {
        return Err(EngineError::TooFewObservations { n, k });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut subsets = vec![Vec::new(); k];
    for (pos, idx) in order.into_iter().enumerate() {
        subsets[pos % k].push(idx);
    }
    for subset in &mut subsets {
        subset.sort_unstable();
    }
    Ok(subsets)
}

/// Greedy argmax labels under the given models (ties go to the lowest
/// component index).
pub fn greedy_labels<O, M: BaseModel<O>>(data: &[O], models: &[M]) -> Vec<usize> {
    data.iter()
        .map(|obs| {
            let mut best = f64::NEG_INFINITY;
            let mut arg = 0;
            for (ci, model) in models.iter().enumerate() {
                let ll = model.log_likelihood(obs);
                if ll > best {
                    best = ll;
                    arg = ci;
                }
            }
            arg
        })
        .collect()
}

fn subsets_from_labels(labels: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut subsets = vec![Vec::new(); k];
    for (i, &z) in labels.iter().enumerate() {
        subsets[z].push(i);
    }
    subsets
}

fn flat_params<O, M: BaseModel<O>>(models: &[M]) -> Vec<f64> {
    models.iter().flat_map(|m| m.params()).collect()
}

fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Fit a K-component mixture by Boltzmann-exploration EM.
///
/// `models` supplies the K components; with [`BeemInit::RandomSubsets`]
/// they are first conditioned on a random nonempty partition of the data,
/// with [`BeemInit::Warm`] they are used as-is. The returned labels and
/// models belong to the iterate with the highest complete-data
/// log-likelihood, with labels re-derived greedily under those parameters.
///
/// The whole fit is a pure function of `(data, models, init, config)`;
/// the only random stream is seeded from `config.seed`.
pub fn beem_fit<O, M: BaseModel<O>>(
    data: &[O],
    mut models: Vec<M>,
    init: BeemInit,
    config: &BeemConfig,
) -> Result<BeemFit<M>, EngineError> {
    config.validate()?;
    let n = data.len();
    let k = models.len();
    if n == 0 {
        return Err(EngineError::EmptyData);
    }
    if k == 0 {
        return Err(EngineError::NoComponents);
    }
    if n < k {
        return Err(EngineError::TooFewObservations { n, k });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = AssignmentState {
        labels: vec![0; n],
        subsets: vec![Vec::new(); k],
        temperature: config.tau0,
        iteration: 0,
    };

    match init {
        BeemInit::RandomSubsets => {
            state.subsets = random_partition(n, k, &mut rng)?;
            for (ci, subset) in state.subsets.iter().enumerate() {
                for &i in subset {
                    state.labels[i] = ci;
                }
                let obs: Vec<&O> = subset.iter().map(|&i| &data[i]).collect();
                models[ci].fit(&obs)?;
            }
        }
        BeemInit::Warm => {
            state.labels = greedy_labels(data, &models);
            state.subsets = subsets_from_labels(&state.labels, k);
        }
    }

    let mut weights: Option<Vec<f64>> = match config.weight_mode {
        WeightMode::UniformFixed => None,
        WeightMode::Learned => Some(
            state
                .subsets
                .iter()
                .map(|s| s.len() as f64 / n as f64)
                .collect(),
        ),
    };

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

    // The initialised parameters count as iterate zero: if no explored
    // iterate beats them, the fit returns the initial solution (this is
    // what keeps a good warm start, e.g. from K-means, intact).
    let mut best_cll = complete_data_loglik(data, &models)?;
    let mut best_models = models.clone();
    let mut best_weights = weights.clone();
    let mut strikes = 0usize;
    let mut prev_params = flat_params(&models);
    let mut value_row = vec![0.0; k];

    for t in 1..=config.max_iters {
        state.iteration = t;
        state.temperature = cool(config.tau0, t, config.alpha);
        let log_weights: Option<Vec<f64>> = weights
            .as_ref()
            .map(|ws| ws.iter().map(|w| w.ln()).collect());

        for i in 0..n {
            for (ci, model) in models.iter().enumerate() {
                value_row[ci] = model.log_likelihood(&data[i]);
            }
            let resp =
                modified_responsibility(&value_row, log_weights.as_deref(), state.temperature)?;
            state.labels[i] = sample_assignment(&resp, &mut rng)?;
        }
        state.subsets = subsets_from_labels(&state.labels, k);

        for (ci, subset) in state.subsets.iter().enumerate() {
            // A component that drew no observations keeps its parameters.
            if subset.is_empty() {
                continue;
            }
            let obs: Vec<&O> = subset.iter().map(|&i| &data[i]).collect();
            models[ci].fit(&obs)?;
        }
        if let Some(ws) = weights.as_mut() {
            for (ci, subset) in state.subsets.iter().enumerate() {
                ws[ci] = subset.len() as f64 / n as f64;
            }
        }

        let cll = complete_data_loglik(data, &models)?;
        report.loglik_trace.push(cll);
        report
            .size_trace
            .push(state.subsets.iter().map(Vec::len).collect());
        report.temp_trace.push(state.temperature);
        report.label_trace.push(state.labels.clone());

        if cll > best_cll {
            best_cll = cll;
            best_models.clone_from(&models);
            best_weights.clone_from(&weights);
            strikes = 0;
        } else {
            strikes += 1;
        }

        match config.stop_rule {
            StopRule::LoglikPatience => {
                if strikes >= config.patience {
                    report.converged = true;
                    break;
                }
            }
            StopRule::ParamChange => {
                let params = flat_params(&models);
                let delta = l2_distance(&params, &prev_params);
                prev_params = params;
                if delta <= config.epsilon {
                    report.converged = true;
                    break;
                }
            }
        }
    }

    report.em_steps = report.loglik_trace.len();
    report.labels = greedy_labels(data, &best_models);
    report.weights = best_weights;
    Ok(BeemFit {
        report,
        models: best_models,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    const LN_2PI: f64 = 1.8378770664093453;

    /// Unit-variance 1-d Gaussian with an MLE-fitted mean; enough model to
    /// exercise the engine without pulling in the real base models.
    #[derive(Debug, Clone)]
    struct UnitNormal {
        mean: f64,
    }

    impl BaseModel<f64> for UnitNormal {
        fn log_likelihood(&self, obs: &f64) -> f64 {
            let d = obs - self.mean;
            -0.5 * (d * d + LN_2PI)
        }
        fn fit(&mut self, subset: &[&f64]) -> Result<(), ModelError> {
            if subset.is_empty() {
                return Err(ModelError::EmptySubset);
            }
            self.mean = subset.iter().copied().sum::<f64>() / subset.len() as f64;
            Ok(())
        }
        fn params(&self) -> Vec<f64> {
            vec![self.mean]
        }
    }

    #[test]
    fn responsibility_tau_one_reduces_to_normalized_likelihoods() {
        let row = [0.2_f64.ln(), 0.8_f64.ln()];
        let r = modified_responsibility(&row, None, 1.0).unwrap();
        assert!((r[0] - 0.2).abs() < 1e-12);
        assert!((r[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn responsibility_equal_row_is_uniform() {
        for c in [-3.7, 0.0, 55.0] {
            let r = modified_responsibility(&[c, c, c], None, 0.3).unwrap();
            for v in r {
                assert!((v - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn responsibility_low_temperature_sharpens() {
        // softmax(2*ln p) = p^2 / sum p^2: [0.04, 0.64] / 0.68.
        let row = [0.2_f64.ln(), 0.8_f64.ln()];
        let r = modified_responsibility(&row, None, 0.5).unwrap();
        assert!((r[0] - 0.04 / 0.68).abs() < 1e-12);
        assert!((r[1] - 0.64 / 0.68).abs() < 1e-12);
    }

    #[test]
    fn responsibility_rejects_degenerate_rows_and_bad_tau() {
        let all_neg_inf = [f64::NEG_INFINITY; 3];
        assert!(matches!(
            modified_responsibility(&all_neg_inf, None, 1.0),
            Err(EngineError::DegenerateResponsibility)
        ));
        assert!(matches!(
            modified_responsibility(&[0.0, 0.1], None, 0.0),
            Err(EngineError::InvalidTemperature(_))
        ));
        assert!(matches!(
            modified_responsibility(&[0.0, 0.1], None, -1.0),
            Err(EngineError::InvalidTemperature(_))
        ));
    }

    #[test]
    fn responsibility_handles_partial_neg_inf() {
        let row = [f64::NEG_INFINITY, 0.0];
        let r = modified_responsibility(&row, None, 1.0).unwrap();
        assert_eq!(r[0], 0.0);
        assert!((r[1] - 1.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn responsibility_rows_normalize_and_shift_invariant(
            row in proptest::collection::vec(-50.0..50.0f64, 1..8),
            shift in -100.0..100.0f64,
            tau in 0.01..100.0f64,
        ) {
            let r = modified_responsibility(&row, None, tau).unwrap();
            let sum: f64 = r.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            prop_assert!(r.iter().all(|&p| p >= 0.0));

            let shifted: Vec<f64> = row.iter().map(|x| x + shift).collect();
            let rs = modified_responsibility(&shifted, None, tau).unwrap();
            for (a, b) in r.iter().zip(&rs) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }

        #[test]
        fn responsibility_limits(row in proptest::collection::vec(-20.0..20.0f64, 2..6)) {
            // tau -> 0+: one-hot argmax (rows with distinct entries).
            let distinct = {
                let mut sorted = row.clone();
                sorted.sort_by(f64::total_cmp);
                sorted.windows(2).all(|w| (w[1] - w[0]).abs() > 1e-6)
            };
            if distinct {
                let r = modified_responsibility(&row, None, 1e-6).unwrap();
                let argmax = row
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .unwrap()
                    .0;
                prop_assert!((r[argmax] - 1.0).abs() < 1e-9);
            }
            // tau -> inf: uniform.
            let k = row.len() as f64;
            let r = modified_responsibility(&row, None, 1e6).unwrap();
            for &p in &r {
                prop_assert!((p - 1.0 / k).abs() < 1e-3);
            }
        }

        #[test]
        fn uniform_weights_cancel(
            row in proptest::collection::vec(-30.0..30.0f64, 2..6),
            tau in 0.05..20.0f64,
        ) {
            let k = row.len() as f64;
            let lw = vec![(1.0 / k).ln(); row.len()];
            let unweighted = modified_responsibility(&row, None, tau).unwrap();
            let weighted = modified_responsibility(&row, Some(&lw), tau).unwrap();
            for (a, b) in unweighted.iter().zip(&weighted) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampling_degenerate_categorical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            assert_eq!(sample_assignment(&[1.0, 0.0, 0.0], &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn sampling_frequency_matches_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let mut ones = 0usize;
        for _ in 0..draws {
            if sample_assignment(&[0.5, 0.5], &mut rng).unwrap() == 0 {
                ones += 1;
            }
        }
        let freq = ones as f64 / draws as f64;
        assert!((0.49..=0.51).contains(&freq), "freq = {freq}");
    }

    #[test]
    fn sampling_is_deterministic_on_cloned_streams() {
        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = a.clone();
        for _ in 0..50 {
            let x = sample_assignment(&[0.3, 0.7], &mut a).unwrap();
            let y = sample_assignment(&[0.3, 0.7], &mut b).unwrap();
            assert_eq!(x, y);
        }
    }

    #[test]
    fn sampling_rejects_bad_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_assignment(&[-0.1, 1.1], &mut rng),
            Err(EngineError::NegativeProbability(_))
        ));
        assert!(matches!(
            sample_assignment(&[0.3, 0.3], &mut rng),
            Err(EngineError::NotNormalized(_))
        ));
    }

    #[test]
    fn cooling_schedule_values() {
        assert_eq!(cool(1.5, 1, 0.97), 1.5);
        assert!((cool(1.5, 2, 0.97) - 1.455).abs() < 1e-12);
        // 1.1 * 0.97^10, checked by repeated multiplication.
        let mut expected = 1.1;
        for _ in 0..10 {
            expected *= 0.97;
        }
        assert!((cool(1.1, 11, 0.97) - expected).abs() < 1e-12);
        assert!((cool(1.1, 11, 0.97) - 0.8112).abs() < 1e-4);
    }

    #[test]
    fn partition_pigeonhole_and_coverage() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let parts = random_partition(4, 4, &mut rng).unwrap();
        for p in &parts {
            assert_eq!(p.len(), 1);
        }

        let parts = random_partition(100, 4, &mut rng).unwrap();
        let mut seen = vec![false; 100];
        for p in &parts {
            assert!(!p.is_empty());
            for &i in p {
                assert!(!seen[i], "index {i} appears twice");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn partition_is_seed_deterministic_and_rejects_small_n() {
        let a = random_partition(20, 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = random_partition(20, 3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(
            random_partition(2, 3, &mut rng),
            Err(EngineError::TooFewObservations { .. })
        ));
    }

    #[test]
    fn complete_data_loglik_standard_normal_at_mode() {
        let models = vec![UnitNormal { mean: 0.0 }];
        let v = complete_data_loglik(&[0.0], &models).unwrap();
        assert!((v - (-0.5 * LN_2PI)).abs() < 1e-12);
    }

    #[test]
    fn complete_data_loglik_additivity_and_max_over_duplicates() {
        let data = [0.4, -1.0, 2.2];
        let models = vec![UnitNormal { mean: 0.3 }];
        let single = complete_data_loglik(&data, &models).unwrap();
        let doubled_data: Vec<f64> = data.iter().chain(&data).copied().collect();
        let doubled = complete_data_loglik(&doubled_data, &models).unwrap();
        assert!((doubled - 2.0 * single).abs() < 1e-10);

        let twin = vec![UnitNormal { mean: 0.3 }, UnitNormal { mean: 0.3 }];
        let twin_value = complete_data_loglik(&data, &twin).unwrap();
        assert!((twin_value - single).abs() < 1e-12);
    }

    fn two_cluster_data() -> Vec<f64> {
        // Well separated 1-d clusters around -5 and +5.
        let mut data = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(424242);
        for _ in 0..30 {
            data.push(-5.0 + rng.gen::<f64>() - 0.5);
        }
        for _ in 0..30 {
            data.push(5.0 + rng.gen::<f64>() - 0.5);
        }
        data
    }

    #[test]
    fn single_component_fit_is_trivial() {
        let data = two_cluster_data();
        let config = BeemConfig {
            seed: 3,
            ..BeemConfig::default()
        };
        let fit = beem_fit(
            &data,
            vec![UnitNormal { mean: 0.0 }],
            BeemInit::RandomSubsets,
            &config,
        )
        .unwrap();
        assert!(fit.report.labels.iter().all(|&z| z == 0));
        // With one component the loglik trace is flat from the first step.
        let first = fit.report.loglik_trace[0];
        for &v in &fit.report.loglik_trace {
            assert!((v - first).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_report_is_pure_function_of_inputs() {
        let data = two_cluster_data();
        let config = BeemConfig {
            seed: 17,
            ..BeemConfig::default()
        };
        let models = vec![UnitNormal { mean: 0.0 }, UnitNormal { mean: 1.0 }];
        let a = beem_fit(&data, models.clone(), BeemInit::RandomSubsets, &config).unwrap();
        let b = beem_fit(&data, models, BeemInit::RandomSubsets, &config).unwrap();
        assert_eq!(a.report, b.report);
    }

    #[test]
    fn traces_partition_the_data() {
        let data = two_cluster_data();
        let n = data.len();
        let config = BeemConfig {
            seed: 23,
            weight_mode: WeightMode::Learned,
            ..BeemConfig::default()
        };
        let models = vec![UnitNormal { mean: -1.0 }, UnitNormal { mean: 1.0 }];
        let fit = beem_fit(&data, models, BeemInit::Warm, &config).unwrap();
        assert_eq!(fit.report.em_steps, fit.report.loglik_trace.len());
        assert_eq!(fit.report.em_steps, fit.report.size_trace.len());
        assert_eq!(fit.report.em_steps, fit.report.temp_trace.len());
        assert_eq!(fit.report.em_steps, fit.report.label_trace.len());
        for sizes in &fit.report.size_trace {
            assert_eq!(sizes.iter().sum::<usize>(), n);
        }
        for (t, &tau) in fit.report.temp_trace.iter().enumerate() {
            assert!((tau - cool(1.5, t + 1, 0.97)).abs() < 1e-12);
        }
        let w = fit.report.weights.expect("learned weights reported");
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn near_zero_temperature_reproduces_hard_em_fixed_point() {
        let data = two_cluster_data();
        let config = BeemConfig {
            tau0: 1e-6,
            alpha: 0.97,
            patience: 10,
            max_iters: 200,
            seed: 9,
            ..BeemConfig::default()
        };
        let models = vec![UnitNormal { mean: -1.0 }, UnitNormal { mean: 1.0 }];
        let fit = beem_fit(&data, models, BeemInit::Warm, &config).unwrap();
        let labels = &fit.report.label_trace;
        // Once assignments stabilize, they stay fixed and the loglik stops
        // decreasing (classification-EM fixed point).
        let stable_from = (1..labels.len())
            .find(|&t| labels[t] == labels[t - 1])
            .expect("labels stabilize");
        for t in stable_from..labels.len() {
            assert_eq!(labels[t], labels[stable_from - 1]);
        }
        let ll = &fit.report.loglik_trace;
        for t in stable_from..ll.len() {
            assert!(ll[t] >= ll[t - 1] - 1e-9);
        }
    }

    #[test]
    fn empty_data_is_an_error() {
        let config = BeemConfig::default();
        let err = beem_fit(
            &[] as &[f64],
            vec![UnitNormal { mean: 0.0 }],
            BeemInit::RandomSubsets,
            &config,
        )
        .unwrap_err();
        assert!(matches!(err, EngineError::EmptyData));
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let mut config = BeemConfig::default();
        config.alpha = 1.0;
        assert!(config.validate().is_err());
        config.alpha = 0.97;
        config.tau0 = 0.0;
        assert!(config.validate().is_err());
        config.tau0 = 1.5;
        config.patience = 0;
        assert!(config.validate().is_err());
    }
}
