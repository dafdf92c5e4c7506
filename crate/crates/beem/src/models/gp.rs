//! Gaussian process regressor over scalar inputs, used as a mixture
//! component for data association.
//!
//! The per-observation score demanded by the engine is the posterior
//! predictive log density of `y` at `x` given the component's current
//! training subset. Hyperparameters are fitted by a derivative-free
//! coordinate search in log-parameter space, maximising the log marginal
//! likelihood with the noise variance held fixed.

use nalgebra::{DMatrix, DVector};

use crate::engine::BaseModel;
use crate::error::ModelError;

const LN_2PI: f64 = 1.8378770664093453;
const CHOLESKY_RETRY_JITTER: f64 = 1e-8;

/// Kernel family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelFamily {
    Rbf,
    Periodic,
}

/// Covariance function with strictly positive hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub output_variance: f64,
    pub lengthscale: f64,
    /// Only meaningful for the periodic family.
    pub period: f64,
}

impl KernelSpec {
    pub fn rbf(output_variance: f64, lengthscale: f64) -> Self {
        Self {
            family: KernelFamily::Rbf,
            output_variance,
            lengthscale,
            period: 1.0,
        }
    }

    pub fn periodic(output_variance: f64, lengthscale: f64, period: f64) -> Self {
        Self {
            family: KernelFamily::Periodic,
            output_variance,
            lengthscale,
            period,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let check = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(ModelError::InvalidParameter(format!(
                    "kernel {name} must be positive, got {v}"
                )))
            }
        };
        check("output_variance", self.output_variance)?;
        check("lengthscale", self.lengthscale)?;
        if self.family == KernelFamily::Periodic {
            check("period", self.period)?;
        }
        Ok(())
    }

    /// Kernel value between two scalar inputs.
    pub fn eval(&self, x: f64, xp: f64) -> f64 {
        let d = x - xp;
        match self.family {
            KernelFamily::Rbf => {
                self.output_variance
                    * (-d * d / (2.0 * self.lengthscale * self.lengthscale)).exp()
            }
            KernelFamily::Periodic => {
                let s = (std::f64::consts::PI * d.abs() / self.period).sin();
                self.output_variance
                    * (-2.0 * s * s / (self.lengthscale * self.lengthscale)).exp()
            }
        }
    }

    fn active_params(&self) -> Vec<f64> {
        match self.family {
            KernelFamily::Rbf => vec![self.output_variance, self.lengthscale],
            KernelFamily::Periodic => {
                vec![self.output_variance, self.lengthscale, self.period]
            }
        }
    }

    fn set_active_param(&mut self, idx: usize, value: f64) {
        match idx {
            0 => self.output_variance = value,
            1 => self.lengthscale = value,
            2 => self.period = value,
            _ => unreachable!("kernel has at most three active parameters"),
        }
    }
}

/// One (input, target) pair scored by a GP mixture component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpObservation {
    pub x: f64,
    pub y: f64,
}

/// GP regressor conditioned on its assigned observations.
#[derive(Debug, Clone)]
pub struct GpRegressor {
    kernel: KernelSpec,
    noise_variance: f64,
    fit_budget: usize,
    search_step: f64,
    optimize_noise: bool,
    xs: Vec<f64>,
    ys: Vec<f64>,
    chol_lower: DMatrix<f64>,
    alpha: DVector<f64>,
}

impl GpRegressor {
    /// A regressor with no training data (prior predictive only).
    /// `fit_budget` is the coordinate-search sweep count applied at every
    /// refit.
    pub fn new(
        kernel: KernelSpec,
        noise_variance: f64,
        fit_budget: usize,
    ) -> Result<Self, ModelError> {
        kernel.validate()?;
        if !(noise_variance > 0.0 && noise_variance.is_finite()) {
            return Err(ModelError::InvalidParameter(format!(
                "noise variance must be positive, got {noise_variance}"
            )));
        }
        Ok(Self {
            kernel,
            noise_variance,
            fit_budget,
            search_step: 0.5,
            optimize_noise: false,
            xs: Vec::new(),
            ys: Vec::new(),
            chol_lower: DMatrix::zeros(0, 0),
            alpha: DVector::zeros(0),
        })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    /// Override the initial multiplicative step (in log space) of the
    /// hyperparameter coordinate search. Smaller steps keep each refit
    /// local to the current hyperparameters.
    pub fn with_search_step(mut self, step: f64) -> Self {
        self.search_step = step;
        self
    }

    /// Include the noise variance in the hyperparameter search (the
    /// supplied noise variance becomes its starting point).
    pub fn with_noise_optimization(mut self, enabled: bool) -> Self {
        self.optimize_noise = enabled;
        self
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn training_len(&self) -> usize {
        self.xs.len()
    }

    /// Condition on a training set and rebuild the factorization.
    pub fn set_training(&mut self, xs: Vec<f64>, ys: Vec<f64>) -> Result<(), ModelError> {
        if xs.len() != ys.len() {
            return Err(ModelError::DimensionMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        self.xs = xs;
        self.ys = ys;
        self.refactor()
    }

    fn refactor(&mut self) -> Result<(), ModelError> {
        let (lower, alpha) =
            factorize(&self.kernel, self.noise_variance, &self.xs, &self.ys)?;
        self.chol_lower = lower;
        self.alpha = alpha;
        Ok(())
    }

    /// Log marginal likelihood of the training targets:
    /// `-1/2 y^T (K + s^2 I)^-1 y - 1/2 ln det(K + s^2 I) - n/2 ln 2pi`.
    pub fn log_marginal_likelihood(&self) -> Result<f64, ModelError> {
        if self.xs.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        Ok(lml_from_parts(&self.chol_lower, &self.alpha, &self.ys))
    }

    /// Log density of `y` under the posterior predictive at `x`
    /// (Gaussian with the standard posterior mean and variance, plus the
    /// observation noise). With no training data this is the prior
    /// predictive `N(0, k(x, x) + noise)`.
    pub fn log_predictive(&self, x: f64, y: f64) -> f64 {
        let prior_var = self.kernel.eval(x, x) + self.noise_variance;
        if self.xs.is_empty() {
            return gaussian_log_density(y, 0.0, prior_var);
        }
        let k_star = DVector::from_iterator(
            self.xs.len(),
            self.xs.iter().map(|&xi| self.kernel.eval(x, xi)),
        );
        let mean = k_star.dot(&self.alpha);
        let v = self
            .chol_lower
            .solve_lower_triangular(&k_star)
            .expect("cached factor is nonsingular");
        let var = (prior_var - v.norm_squared()).max(1e-12);
        gaussian_log_density(y, mean, var)
    }

    /// Maximise the log marginal likelihood over the kernel
    /// hyperparameters by coordinate search in log space, leaving the
    /// noise variance fixed. `budget` counts full sweeps; the returned
    /// objective is never below its value at the starting point.
    pub fn fit_hyperparams(&mut self, budget: usize) -> Result<f64, ModelError> {
        if self.xs.len() < 2 {
            return Err(ModelError::TooFewObservations {
                needed: 2,
                got: self.xs.len(),
            });
        }
        let mut best = self.log_marginal_likelihood()?;
        let mut step = self.search_step;
        let kernel_params = self.kernel.active_params().len();
        let total_params = kernel_params + usize::from(self.optimize_noise);
        // Greedy coordinate search: each budget unit applies the single
        // best improving move across all coordinates and directions.
        for _ in 0..budget {
            let mut move_best = best;
            let mut chosen: Option<(KernelSpec, f64, DMatrix<f64>, DVector<f64>)> = None;
            for idx in 0..total_params {
                let current = if idx < kernel_params {
                    self.kernel.active_params()[idx]
                } else {
                    self.noise_variance
                };
                for direction in [1.0f64, -1.0] {
                    let candidate = current * (direction * step).exp();
                    if !(1e-6..=1e6).contains(&candidate) {
                        continue;
                    }
                    let mut trial_kernel = self.kernel.clone();
                    let mut trial_noise = self.noise_variance;
                    if idx < kernel_params {
                        trial_kernel.set_active_param(idx, candidate);
                    } else {
                        trial_noise = candidate;
                    }
                    let Ok((lower, alpha)) =
                        factorize(&trial_kernel, trial_noise, &self.xs, &self.ys)
                    else {
                        continue;
                    };
                    let lml = lml_from_parts(&lower, &alpha, &self.ys);
                    if lml > move_best {
                        move_best = lml;
                        chosen = Some((trial_kernel, trial_noise, lower, alpha));
                    }
                }
            }
            match chosen {
                Some((kernel, noise, lower, alpha)) => {
                    best = move_best;
                    self.kernel = kernel;
                    self.noise_variance = noise;
                    self.chol_lower = lower;
                    self.alpha = alpha;
                }
                None => {
                    step *= 0.5;
                    if step < 1e-3 {
                        break;
                    }
                }
            }
        }
        Ok(best)
    }
}

fn gaussian_log_density(y: f64, mean: f64, var: f64) -> f64 {
    let d = y - mean;
    -0.5 * (LN_2PI + var.ln() + d * d / var)
}

fn gram(kernel: &KernelSpec, noise_variance: f64, xs: &[f64]) -> DMatrix<f64> {
    let n = xs.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(xs[i], xs[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
        k[(i, i)] += noise_variance;
    }
    k
}

/// Cholesky of the noisy Gram matrix plus the solved weights; retries once
/// with extra diagonal jitter before failing.
fn factorize(
    kernel: &KernelSpec,
    noise_variance: f64,
    xs: &[f64],
    ys: &[f64],
) -> Result<(DMatrix<f64>, DVector<f64>), ModelError> {
    if xs.is_empty() {
        return Ok((DMatrix::zeros(0, 0), DVector::zeros(0)));
    }
    let base = gram(kernel, noise_variance, xs);
    let chol = match nalgebra::Cholesky::new(base.clone()) {
        Some(c) => c,
        None => {
            let bumped = base + DMatrix::identity(xs.len(), xs.len())
                * (CHOLESKY_RETRY_JITTER * (1.0 + kernel.output_variance));
            nalgebra::Cholesky::new(bumped).ok_or(ModelError::FactorizationFailed)?
        }
    };
    let y = DVector::from_column_slice(ys);
    let alpha = chol.solve(&y);
    Ok((chol.unpack(), alpha))
}

fn lml_from_parts(lower: &DMatrix<f64>, alpha: &DVector<f64>, ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let y = DVector::from_column_slice(ys);
    let log_det = 2.0 * lower.diagonal().iter().map(|v| v.ln()).sum::<f64>();
    -0.5 * y.dot(alpha) - 0.5 * log_det - 0.5 * n * LN_2PI
}

impl BaseModel<GpObservation> for GpRegressor {
    fn log_likelihood(&self, obs: &GpObservation) -> f64 {
        self.log_predictive(obs.x, obs.y)
    }

    fn fit(&mut self, subset: &[&GpObservation]) -> Result<(), ModelError> {
        if subset.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let xs: Vec<f64> = subset.iter().map(|o| o.x).collect();
        let ys: Vec<f64> = subset.iter().map(|o| o.y).collect();
        self.set_training(xs, ys)?;
        if self.xs.len() >= 2 && self.fit_budget > 0 {
            self.fit_hyperparams(self.fit_budget)?;
        }
        Ok(())
    }

    fn params(&self) -> Vec<f64> {
        let mut out = self.kernel.active_params();
        out.push(self.noise_variance);
        out
    }

    // (noise participates in `params` whether or not it is optimized)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_at_zero_distance_is_output_variance() {
        let rbf = KernelSpec::rbf(1.7, 0.4);
        assert_relative_eq!(rbf.eval(0.3, 0.3), 1.7, epsilon = 1e-12);
        let per = KernelSpec::periodic(0.9, 1.1, 2.0);
        assert_relative_eq!(per.eval(-1.0, -1.0), 0.9, epsilon = 1e-12);
    }

    #[test]
    fn periodic_kernel_returns_to_variance_after_full_period() {
        let per = KernelSpec::periodic(0.9, 0.7, 2.5);
        assert_relative_eq!(per.eval(0.0, 2.5), 0.9, epsilon = 1e-12);
    }

    #[test]
    fn rbf_unit_distance_value() {
        let rbf = KernelSpec::rbf(1.0, 1.0);
        assert_relative_eq!(rbf.eval(0.0, 1.0), (-0.5_f64).exp(), epsilon = 1e-12);
    }

    #[test]
    fn single_point_marginal_matches_closed_form() {
        let mut gp = GpRegressor::new(KernelSpec::rbf(1.3, 0.5), 0.01, 0).unwrap();
        let y = 0.7;
        gp.set_training(vec![0.2], vec![y]).unwrap();
        let total_var = 1.3 + 0.01;
        let expected =
            -0.5 * (y * y / total_var + (2.0 * std::f64::consts::PI * total_var).ln());
        assert_relative_eq!(
            gp.log_marginal_likelihood().unwrap(),
            expected,
            epsilon = 1e-12
        );
    }

    #[test]
    fn zero_targets_kill_the_quadratic_term() {
        let mut gp = GpRegressor::new(KernelSpec::rbf(1.0, 0.7), 0.1, 0).unwrap();
        let xs = vec![0.0, 0.4, 0.9];
        gp.set_training(xs.clone(), vec![0.0; 3]).unwrap();
        let k = gram(gp.kernel(), 0.1, &xs);
        let expected = -0.5 * k.determinant().ln() - 1.5 * LN_2PI;
        assert_relative_eq!(
            gp.log_marginal_likelihood().unwrap(),
            expected,
            epsilon = 1e-10
        );
    }

    /// Dense oracle with explicit inverse/determinant (LU route).
    fn dense_lml(kernel: &KernelSpec, noise: f64, xs: &[f64], ys: &[f64]) -> f64 {
        let k = gram(kernel, noise, xs);
        let inv = k.clone().try_inverse().unwrap();
        let y = DVector::from_column_slice(ys);
        let quad = (y.transpose() * &inv * &y)[(0, 0)];
        -0.5 * quad - 0.5 * k.determinant().ln() - 0.5 * ys.len() as f64 * LN_2PI
    }

    #[test]
    fn marginal_likelihood_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for case in 0..30 {
            let n = 1 + case % 5;
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let kernel = if case % 2 == 0 {
                KernelSpec::rbf(rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0))
            } else {
                KernelSpec::periodic(
                    rng.gen_range(0.2..2.0),
                    rng.gen_range(0.3..2.0),
                    rng.gen_range(0.5..3.0),
                )
            };
            let mut gp = GpRegressor::new(kernel.clone(), 0.05, 0).unwrap();
            gp.set_training(xs.clone(), ys.clone()).unwrap();
            let fast = gp.log_marginal_likelihood().unwrap();
            let slow = dense_lml(&kernel, 0.05, &xs, &ys);
            let rel = (fast - slow).abs() / slow.abs().max(1.0);
            assert!(rel < 1e-8, "case {case}: {fast} vs {slow}");
        }
    }

    /// Joint-Gaussian conditional oracle for the posterior predictive.
    fn dense_log_predictive(
        kernel: &KernelSpec,
        noise: f64,
        xs: &[f64],
        ys: &[f64],
        x: f64,
        y: f64,
    ) -> f64 {
        let k = gram(kernel, noise, xs);
        let inv = k.try_inverse().unwrap();
        let k_star = DVector::from_iterator(xs.len(), xs.iter().map(|&xi| kernel.eval(x, xi)));
        let yv = DVector::from_column_slice(ys);
        let mean = (k_star.transpose() * &inv * &yv)[(0, 0)];
        let var =
            kernel.eval(x, x) + noise - (k_star.transpose() * &inv * &k_star)[(0, 0)];
        gaussian_log_density(y, mean, var)
    }

    #[test]
    fn predictive_matches_dense_conditional_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for case in 0..30 {
            let n = 1 + case % 4;
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let ys: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let kernel = KernelSpec::rbf(rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0));
            let mut gp = GpRegressor::new(kernel.clone(), 0.05, 0).unwrap();
            gp.set_training(xs.clone(), ys.clone()).unwrap();
            let x = rng.gen_range(-2.0..2.0);
            let y = rng.gen_range(-1.5..1.5);
            let fast = gp.log_predictive(x, y);
            let slow = dense_log_predictive(&kernel, 0.05, &xs, &ys, x, y);
            assert!(
                (fast - slow).abs() / slow.abs().max(1.0) < 1e-8,
                "case {case}: {fast} vs {slow}"
            );
        }
    }

    #[test]
    fn empty_training_set_gives_prior_predictive() {
        let gp = GpRegressor::new(KernelSpec::rbf(1.2, 0.5), 0.01, 0).unwrap();
        let expected = gaussian_log_density(0.4, 0.0, 1.2 + 0.01);
        assert_relative_eq!(gp.log_predictive(0.0, 0.4), expected, epsilon = 1e-12);
    }

    #[test]
    fn predictive_peaks_near_training_target_at_small_noise() {
        let mut gp = GpRegressor::new(KernelSpec::rbf(1.0, 0.5), 1e-4, 0).unwrap();
        gp.set_training(vec![0.5], vec![0.8]).unwrap();
        // Posterior variance at the training input: noise-dominated.
        // var = k(x,x) + noise - k(x,x)^2 / (k(x,x) + noise)
        let prior = 1.0;
        let var = prior + 1e-4 - prior * prior / (prior + 1e-4);
        let max_density = gaussian_log_density(0.8, 0.8, var);
        let got = gp.log_predictive(0.5, 0.8);
        // The posterior variance is a difference of near-equal numbers, so
        // only ~1e-5 relative agreement is available here.
        assert!((got - max_density).abs() < 1e-4, "{got} vs {max_density}");
        assert!(got > gp.log_predictive(0.5, 0.5));
    }

    #[test]
    fn hyperparam_search_never_decreases_objective_and_budget_zero_is_noop() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let xs: Vec<f64> = (0..25).map(|i| i as f64 / 24.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|&x| (2.0 * std::f64::consts::PI * x).sin() + 0.05 * rng.gen::<f64>())
            .collect();
        let mut gp = GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 0).unwrap();
        gp.set_training(xs, ys).unwrap();
        let start = gp.log_marginal_likelihood().unwrap();

        let before = gp.kernel().clone();
        let fitted = gp.fit_hyperparams(0).unwrap();
        assert_eq!(gp.kernel(), &before);
        assert_relative_eq!(fitted, start, epsilon = 1e-12);

        let after = gp.fit_hyperparams(10).unwrap();
        assert!(after >= start - 1e-12);
        assert_relative_eq!(after, gp.log_marginal_likelihood().unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn lengthscale_recovered_within_factor_two() {
        // Data drawn from a GP with known lengthscale via a Cholesky draw.
        let true_len = 0.3;
        let kernel = KernelSpec::rbf(1.0, true_len);
        let n = 60;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64 * 3.0).collect();
        let k = gram(&kernel, 1e-8, &xs);
        let chol = nalgebra::Cholesky::new(k).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let z = DVector::from_iterator(n, (0..n).map(|_| {
            let u1: f64 = rng.gen::<f64>().max(1e-12);
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        }));
        let f = chol.l() * z;
        let ys: Vec<f64> = f.iter().copied().collect();

        let mut gp = GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 0).unwrap();
        gp.set_training(xs, ys).unwrap();
        gp.fit_hyperparams(25).unwrap();
        let fitted = gp.kernel().lengthscale;
        assert!(
            fitted > true_len / 2.0 && fitted < true_len * 2.0,
            "fitted lengthscale {fitted} vs true {true_len}"
        );
    }

    #[test]
    fn fit_hyperparams_requires_two_points() {
        let mut gp = GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 0).unwrap();
        assert!(matches!(
            gp.fit_hyperparams(5),
            Err(ModelError::TooFewObservations { .. })
        ));
        gp.set_training(vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(
            gp.fit_hyperparams(5),
            Err(ModelError::TooFewObservations { .. })
        ));
    }

    #[test]
    fn gram_matrices_are_symmetric_and_factorizable() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let n = rng.gen_range(2..12);
            let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let kernel = KernelSpec::rbf(rng.gen_range(0.2..2.0), rng.gen_range(0.1..2.0));
            let k = gram(&kernel, 1e-6, &xs);
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(k[(i, j)], k[(j, i)]);
                }
            }
            assert!(nalgebra::Cholesky::new(k).is_some());
        }
    }
}
