use beem::baselines::{em_fit_gmm, kmeans_gaussian_init, EmConfig, GmmInit};
use beem::datagen::{gen_rainbow, gen_square};
use beem::engine::{beem_fit, BeemConfig, BeemInit, WeightMode};
use beem::metrics::{purity_acc, Contingency};
use beem::models::Gaussian;
use std::time::Instant;

fn acc(truth: &[usize], pred: &[usize]) -> f64 {
    purity_acc(&Contingency::from_labels(truth, pred).unwrap())
}

fn summarize(name: &str, values: &[f64], steps: &[f64]) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sm = steps.iter().sum::<f64>() / steps.len() as f64;
    println!("{name}: ACC {mean:.3} ({:.3})  steps {sm:.1}", var.sqrt());
}

fn main() {
    let t0 = Instant::now();
    let repeats = 25;

    // Unbalanced square: BEEM A/I, BEEM A/II, EM A
    let square = gen_square([100, 50, 50, 10], 10.0, 0.3, 42);
    for (label, mode) in [("BEEM A I", WeightMode::UniformFixed), ("BEEM A II", WeightMode::Learned)] {
        let mut accs = Vec::new();
        let mut steps = Vec::new();
        for r in 0..repeats {
            let config = BeemConfig { weight_mode: mode, seed: 1000 + r, ..BeemConfig::default() };
            let models = vec![Gaussian::isotropic(2, 1.0); 4];
            let fit = beem_fit(&square.points, models, BeemInit::RandomSubsets, &config).unwrap();
            accs.push(acc(&square.labels, &fit.report.labels));
            steps.push(fit.report.em_steps as f64);
        }
        summarize(&format!("square {label}"), &accs, &steps);
    }
    {
        let mut accs = Vec::new();
        let mut steps = Vec::new();
        for r in 0..repeats {
            let config = EmConfig { seed: 2000 + r, ..EmConfig::default() };
            let fit = em_fit_gmm(&square.points, 4, &config).unwrap();
            accs.push(acc(&square.labels, &fit.report.labels));
            steps.push(fit.report.em_steps as f64);
        }
        summarize("square EM A", &accs, &steps);
    }
    println!("square block: {:.1?}", t0.elapsed());

    // Rainbow: BEEM B, BEEM A, EM A
    let t1 = Instant::now();
    let rainbow = gen_rainbow(1000, 9.0, 8, 43);
    {
        let mut accs = Vec::new();
        let mut steps = Vec::new();
        for r in 0..repeats {
            let config = BeemConfig { seed: 3000 + r, ..BeemConfig::default() };
            let init_models = kmeans_gaussian_init(&rainbow.points, 8, 3000 + r).unwrap();
            let fit = beem_fit(&rainbow.points, init_models, BeemInit::Warm, &config).unwrap();
            accs.push(acc(&rainbow.labels, &fit.report.labels));
            steps.push(fit.report.em_steps as f64);
        }
        summarize("rainbow BEEM B", &accs, &steps);
    }
    {
        let mut accs = Vec::new();
        let mut steps = Vec::new();
        let mut decreases = 0;
        for r in 0..repeats {
            let config = BeemConfig { seed: 4000 + r, ..BeemConfig::default() };
            let models = vec![Gaussian::isotropic(2, 1.0); 8];
            let fit = beem_fit(&rainbow.points, models, BeemInit::RandomSubsets, &config).unwrap();
            accs.push(acc(&rainbow.labels, &fit.report.labels));
            steps.push(fit.report.em_steps as f64);
            if fit.report.loglik_trace.windows(2).any(|w| w[1] < w[0]) { decreases += 1; }
        }
        summarize("rainbow BEEM A", &accs, &steps);
        println!("rainbow BEEM A runs with a loglik decrease: {decreases}/{repeats}");
    }
    {
        let mut accs = Vec::new();
        let mut steps = Vec::new();
        for r in 0..repeats {
            let config = EmConfig { seed: 5000 + r, ..EmConfig::default() };
            let fit = em_fit_gmm(&rainbow.points, 8, &config).unwrap();
            accs.push(acc(&rainbow.labels, &fit.report.labels));
            steps.push(fit.report.em_steps as f64);
        }
        summarize("rainbow EM A", &accs, &steps);
    }
    println!("rainbow block: {:.1?}", t1.elapsed());
    println!("total: {:.1?}", t0.elapsed());
}
