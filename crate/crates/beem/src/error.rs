//! Error types shared across the library.

use thiserror::Error;

/// Errors raised while fitting or evaluating a base model.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot fit on an empty observation subset")]
    EmptySubset,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("covariance is not positive definite after jitter")]
    NotPositiveDefinite,
    #[error("matrix factorization failed after jitter retry")]
    FactorizationFailed,
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Errors raised by the mixture-fitting engine.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("empty dataset")]
    EmptyData,
    #[error("mixture needs at least one component")]
    NoComponents,
    #[error("cannot partition {n} observations into {k} nonempty subsets")]
    TooFewObservations { n: usize, k: usize },
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("degenerate responsibility row: all entries are -inf")]
    DegenerateResponsibility,
    #[error("log-likelihood evaluated to NaN")]
    InvalidLogLikelihood,
    #[error("probabilities must be nonnegative, got {0}")]
    NegativeProbability(f64),
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Errors raised by the baseline fitters and initialisers.
#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("empty dataset")]
    EmptyData,
    #[error("need at least {k} observations for {k} clusters, got {n}")]
    TooFewObservations { n: usize, k: usize },
    #[error("fewer than {k} distinct points available for seeding")]
    TooFewDistinctPoints { k: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Errors raised by clustering-metric computations.
#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("label length mismatch: {truth} true vs {pred} predicted")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("labels are empty")]
    EmptyLabels,
    #[error("ROC requires both classes to be present")]
    SingleClass,
    #[error("scores must be finite")]
    NonFiniteScore,
}

/// Errors raised by dataset generators and loaders.
#[derive(Debug, Error)]
pub enum DataError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("label column {0:?} not found in header")]
    MissingLabelColumn(String),
    #[error("classes {missing:?} not found; available: {available:?}")]
    MissingClasses {
        missing: Vec<String>,
        available: Vec<String>,
    },
    #[error("class filter is empty")]
    EmptyClassFilter,
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}
