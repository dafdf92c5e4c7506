use beem::datagen::gen_random_hmms;
use beem::engine::{beem_fit, BaseModel, BeemConfig, BeemInit};
use beem::error::ModelError;
use beem::metrics::{purity_acc, Contingency};
use beem::models::GaussianHmm;
use beem::Sequence;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

fn acc(t: &[usize], p: &[usize]) -> f64 { purity_acc(&Contingency::from_labels(t, p).unwrap()) }

/// HMM component that re-initialises from its assigned subset at every
/// fit, seeded deterministically from (carried seed, subset content).
#[derive(Debug, Clone)]
struct FreshHmm {
    inner: GaussianHmm,
    n_states: usize,
    seed: u64,
    budget: usize,
}

impl FreshHmm {
    fn new(n_states: usize, seed: u64, budget: usize, frames: &[&[f64]]) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let inner = GaussianHmm::random_init(n_states, frames, &mut rng).unwrap();
        Self { inner, n_states, seed, budget }
    }
}

impl BaseModel<Sequence> for FreshHmm {
    fn log_likelihood(&self, obs: &Sequence) -> f64 {
        self.inner.forward_loglik(obs).unwrap()
    }
    fn fit(&mut self, subset: &[&Sequence]) -> Result<(), ModelError> {
        use rand::SeedableRng;
        let mut h = DefaultHasher::new();
        self.seed.hash(&mut h);
        subset.len().hash(&mut h);
        for s in subset {
            s.len().hash(&mut h);
            if let Some(f) = s.first() { f[0].to_bits().hash(&mut h); }
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(h.finish());
        let frames: Vec<&[f64]> = subset.iter().flat_map(|s| s.iter()).map(|f| f.as_slice()).collect();
        self.inner = GaussianHmm::random_init(self.n_states, &frames, &mut rng)?;
        self.inner.baum_welch(subset, self.budget, 1e-4)?;
        Ok(())
    }
    fn params(&self) -> Vec<f64> { self.inner.params() }
}

fn main() {
    let budget: usize = std::env::var("BUDGET").map(|v| v.parse().unwrap()).unwrap_or(10);
    for (lo, hi) in [(20usize, 50usize), (5, 10)] {
        let mut beem_accs = Vec::new();
        for r in 0..45u64 {
            let data = gen_random_hmms(3, 4, &[-2.0, -1.0, 0.0, 1.0], 0.1, 20, lo, hi, 500 + r).unwrap();
            let frames: Vec<&[f64]> = data.sequences.iter().flatten().map(|f| f.as_slice()).collect();
            let models: Vec<FreshHmm> = (0..3)
                .map(|ci| FreshHmm::new(4, 9100 + r * 31 + ci, budget, &frames))
                .collect();
            let config = BeemConfig { seed: 9100 + r, ..BeemConfig::default() };
            let fit = beem_fit(&data.sequences, models, BeemInit::RandomSubsets, &config).unwrap();
            beem_accs.push(acc(&data.labels, &fit.report.labels));
        }
        let n = beem_accs.len() as f64;
        let bm = beem_accs.iter().sum::<f64>() / n;
        println!("L[{lo},{hi}] fresh-refit BEEM: {bm:.3}");
    }

}
