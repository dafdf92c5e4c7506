//! Multivariate Gaussian component with MLE fitting.

use nalgebra::{DMatrix, DVector};

use crate::engine::BaseModel;
use crate::error::ModelError;
use crate::Point;

use super::DEFAULT_JITTER;

const LN_2PI: f64 = 1.8378770664093453;

/// A multivariate normal distribution used as a mixture component.
///
/// The covariance factorization is cached at construction, so density
/// evaluation is a triangular solve.
#[derive(Debug, Clone)]
pub struct Gaussian {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    jitter: f64,
    chol_lower: DMatrix<f64>,
    log_det: f64,
}

impl Gaussian {
    /// Build from explicit parameters; fails if the covariance is not
    /// positive definite.
    pub fn new(mean: DVector<f64>, covariance: DMatrix<f64>) -> Result<Self, ModelError> {
        Self::with_jitter(mean, covariance, DEFAULT_JITTER)
    }

    /// As [`Gaussian::new`], with an explicit jitter retained for refits.
    pub fn with_jitter(
        mean: DVector<f64>,
        covariance: DMatrix<f64>,
        jitter: f64,
    ) -> Result<Self, ModelError> {
        let d = mean.len();
        if covariance.nrows() != d || covariance.ncols() != d {
            return Err(ModelError::DimensionMismatch {
                expected: d,
                got: covariance.nrows(),
            });
        }
        let chol = nalgebra::Cholesky::new(covariance.clone())
            .ok_or(ModelError::NotPositiveDefinite)?;
        let chol_lower = chol.unpack();
        let log_det = 2.0 * chol_lower.diagonal().iter().map(|v| v.ln()).sum::<f64>();
        Ok(Self {
            mean,
            covariance,
            jitter,
            chol_lower,
            log_det,
        })
    }

    /// Isotropic Gaussian `N(0, var * I)`; handy as a blank component
    /// before the engine's random-partition initialisation.
    pub fn isotropic(dim: usize, var: f64) -> Self {
        let mean = DVector::zeros(dim);
        let covariance = DMatrix::identity(dim, dim) * var;
        Self::new(mean, covariance).expect("isotropic covariance is positive definite")
    }

    /// Maximum-likelihood fit: sample mean and biased sample covariance
    /// plus `jitter * I`. A single point yields covariance `jitter * I`.
    pub fn mle_fit<P: AsRef<[f64]>>(points: &[P], jitter: f64) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        let d = points[0].as_ref().len();
        let n = points.len() as f64;

        let mut mean = DVector::zeros(d);
        for p in points {
            let p = p.as_ref();
            if p.len() != d {
                return Err(ModelError::DimensionMismatch {
                    expected: d,
                    got: p.len(),
                });
            }
            for (j, &v) in p.iter().enumerate() {
                mean[j] += v;
            }
        }
        mean /= n;

        let mut covariance = DMatrix::zeros(d, d);
        for p in points {
            let p = p.as_ref();
            for a in 0..d {
                let da = p[a] - mean[a];
                for b in a..d {
                    covariance[(a, b)] += da * (p[b] - mean[b]);
                }
            }
        }
        covariance /= n;
        for a in 0..d {
            for b in (a + 1)..d {
                covariance[(b, a)] = covariance[(a, b)];
            }
            covariance[(a, a)] += jitter;
        }
        Self::with_jitter(mean, covariance, jitter)
    }

    /// Exact log density at `x` via the cached Cholesky factor.
    pub fn log_pdf(&self, x: &[f64]) -> f64 {
        let d = self.mean.len();
        assert_eq!(x.len(), d, "observation dimension mismatch");
        let mut diff = DVector::from_column_slice(x);
        diff -= &self.mean;
        let z = self
            .chol_lower
            .solve_lower_triangular(&diff)
            .expect("cached factor has a nonsingular diagonal");
        -0.5 * (d as f64 * LN_2PI + self.log_det + z.norm_squared())
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

impl BaseModel<Point> for Gaussian {
    fn log_likelihood(&self, obs: &Point) -> f64 {
        self.log_pdf(obs)
    }

    fn fit(&mut self, subset: &[&Point]) -> Result<(), ModelError> {
        *self = Gaussian::mle_fit(subset, self.jitter)?;
        Ok(())
    }

    fn params(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.mean.iter().copied().collect();
        out.extend(self.covariance.iter().copied());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn standard_normal_at_mode() {
        let g = Gaussian::isotropic(1, 1.0);
        assert_relative_eq!(g.log_pdf(&[0.0]), -0.5 * LN_2PI, epsilon = 1e-12);
    }

    #[test]
    fn translation_invariance() {
        let mean = DVector::from_vec(vec![1.0, -2.0]);
        let cov = DMatrix::from_row_slice(2, 2, &[1.3, 0.4, 0.4, 0.9]);
        let g = Gaussian::new(mean.clone(), cov.clone()).unwrap();
        let shifted = Gaussian::new(mean.add_scalar(3.5), cov).unwrap();
        let x = [0.2, 0.7];
        let xs = [0.2 + 3.5, 0.7 + 3.5];
        assert_relative_eq!(g.log_pdf(&x), shifted.log_pdf(&xs), epsilon = 1e-12);
    }

    #[test]
    fn corner_density_matches_closed_form() {
        // d=2, zero mean, covariance 0.3*I, evaluated at (5, 5):
        // -ln(2*pi*0.3) - 25/0.3.
        let g = Gaussian::isotropic(2, 0.3);
        let expected = -(2.0 * std::f64::consts::PI * 0.3).ln() - 25.0 / 0.3;
        assert_relative_eq!(g.log_pdf(&[5.0, 5.0]), expected, epsilon = 1e-9);
    }

    #[test]
    fn mle_fit_square_of_points() {
        let points = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![0.0, 2.0],
            vec![2.0, 2.0],
        ];
        let g = Gaussian::mle_fit(&points, 0.0).unwrap();
        assert_relative_eq!(g.mean()[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.mean()[1], 1.0, epsilon = 1e-12);
        let cov = g.covariance();
        assert_relative_eq!(cov[(0, 0)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(cov[(1, 1)], 1.0, epsilon = 1e-12);
        assert_relative_eq!(cov[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn single_point_yields_jitter_covariance() {
        let p = vec![vec![3.0, -1.0]];
        let g = Gaussian::mle_fit(&p, 1e-6).unwrap();
        assert_relative_eq!(g.mean()[0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(g.covariance()[(0, 0)], 1e-6, epsilon = 1e-18);
        assert_relative_eq!(g.covariance()[(1, 1)], 1e-6, epsilon = 1e-18);
    }

    #[test]
    fn fit_is_permutation_invariant() {
        let points = vec![
            vec![0.3, 1.0],
            vec![-2.0, 0.5],
            vec![4.0, 4.0],
            vec![1.1, -0.7],
        ];
        let mut reversed = points.clone();
        reversed.reverse();
        let a = Gaussian::mle_fit(&points, 1e-6).unwrap();
        let b = Gaussian::mle_fit(&reversed, 1e-6).unwrap();
        assert_relative_eq!(a.mean()[0], b.mean()[0], epsilon = 1e-12);
        assert_relative_eq!(a.covariance()[(0, 1)], b.covariance()[(0, 1)], epsilon = 1e-12);
    }

    #[test]
    fn empty_fit_is_an_error() {
        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(matches!(
            Gaussian::mle_fit(&empty, 1e-6),
            Err(ModelError::EmptySubset)
        ));
    }

    #[test]
    fn non_positive_definite_covariance_is_rejected() {
        let mean = DVector::zeros(2);
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            Gaussian::new(mean, cov),
            Err(ModelError::NotPositiveDefinite)
        ));
    }

    #[test]
    fn fitted_density_peaks_at_sample_mean() {
        let points = vec![vec![-1.0], vec![0.0], vec![0.5], vec![2.5]];
        let g = Gaussian::mle_fit(&points, 1e-6).unwrap();
        let at_mean = g.log_pdf(&[g.mean()[0]]);
        let mut x = -5.0;
        while x <= 5.0 {
            assert!(g.log_pdf(&[x]) <= at_mean + 1e-12);
            x += 0.05;
        }
    }
}
