use beem::baselines::{em_fit_gmm, EmConfig, GmmInit};
use beem::datagen::{gen_rainbow, gen_square, load_labeled_csv, LabelColumn};
use beem::metrics::{purity_acc, Contingency};
use std::path::Path;

fn acc(truth: &[usize], pred: &[usize]) -> f64 {
    purity_acc(&Contingency::from_labels(truth, pred).unwrap())
}

fn run(name: &str, points: &[Vec<f64>], labels: &[usize], k: usize, tol: f64, init: GmmInit) {
    let repeats = 25;
    let mut accs = Vec::new();
    let mut steps = Vec::new();
    for r in 0..repeats {
        let config = EmConfig { tol, init: init.clone(), seed: 7000 + r, ..EmConfig::default() };
        let fit = em_fit_gmm(points, k, &config).unwrap();
        accs.push(acc(labels, &fit.report.labels));
        steps.push(fit.report.em_steps as f64);
    }
    let n = accs.len() as f64;
    let mean = accs.iter().sum::<f64>() / n;
    let sd = (accs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let sm = steps.iter().sum::<f64>() / n;
    println!("{name} tol={tol:.0e}: ACC {mean:.3} ({sd:.3}) steps {sm:.1}");
}

fn main() {
    let square = gen_square([100, 50, 50, 10], 10.0, 0.3, 42);
    let rainbow = gen_rainbow(1000, 9.0, 8, 43);
    let iris = load_labeled_csv(Path::new("data/iris.csv"), &LabelColumn::Name("species".into())).unwrap();
    for tol in [1e-3, 3e-3, 1e-2, 3e-2] {
        run("square  A", &square.points, &square.labels, 4, tol, GmmInit::RandomObservations);
        run("rainbow A", &rainbow.points, &rainbow.labels, 8, tol, GmmInit::RandomObservations);
        run("iris    A", &iris.points, &iris.labels, 3, tol, GmmInit::RandomObservations);
        run("iris    B", &iris.points, &iris.labels, 3, tol, GmmInit::KMeans);
        run("rainbowB", &rainbow.points, &rainbow.labels, 8, tol, GmmInit::KMeans);
        println!();
    }
}
