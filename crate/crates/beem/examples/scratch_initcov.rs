use beem::baselines::{em_fit_gmm, EmConfig, GmmInit};
use beem::datagen::{gen_rainbow, gen_square};
use beem::metrics::{purity_acc, Contingency};
use beem::models::Gaussian;
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn acc(truth: &[usize], pred: &[usize]) -> f64 {
    purity_acc(&Contingency::from_labels(truth, pred).unwrap())
}

fn manual_init(points: &[Vec<f64>], k: usize, cov_scale: f64, seed: u64) -> Vec<Gaussian> {
    let d = points[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.shuffle(&mut rng);
    idx.truncate(k);
    idx.iter()
        .map(|&i| {
            Gaussian::with_jitter(
                DVector::from_column_slice(&points[i]),
                DMatrix::identity(d, d) * cov_scale,
                1e-6,
            )
            .unwrap()
        })
        .collect()
}

fn run(name: &str, points: &[Vec<f64>], labels: &[usize], k: usize, cov_scale: f64) {
    let repeats = 25;
    let mut accs = Vec::new();
    let mut steps = Vec::new();
    for r in 0..repeats {
        let init = GmmInit::Provided(manual_init(points, k, cov_scale, 9000 + r));
        let config = EmConfig { init, seed: 9000 + r, ..EmConfig::default() };
        let fit = em_fit_gmm(points, k, &config).unwrap();
        accs.push(acc(labels, &fit.report.labels));
        steps.push(fit.report.em_steps as f64);
    }
    let n = accs.len() as f64;
    let mean = accs.iter().sum::<f64>() / n;
    let sd = (accs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let sm = steps.iter().sum::<f64>() / n;
    println!("{name} cov={cov_scale}: ACC {mean:.3} ({sd:.3}) steps {sm:.1}");
}

fn main() {
    let square = gen_square([100, 50, 50, 10], 10.0, 0.3, 42);
    let rainbow = gen_rainbow(1000, 9.0, 8, 43);
    for cov in [1e-6, 1.0] {
        run("square", &square.points, &square.labels, 4, cov);
        run("rainbow", &rainbow.points, &rainbow.labels, 8, cov);
    }
}
