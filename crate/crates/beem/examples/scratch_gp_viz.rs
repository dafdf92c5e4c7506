use beem::datagen::{gen_sinusoid_association, SinusoidOptions, SinusoidVariant};
use beem::engine::{beem_fit, BeemConfig, BeemInit};
use beem::metrics::{purity_acc, Contingency};
use beem::models::{GpObservation, GpRegressor, KernelSpec};

fn main() {
    let data = gen_sinusoid_association(SinusoidVariant::Simple, SinusoidOptions::default(), 77);
    let obs: Vec<GpObservation> = data.points.iter().map(|p| GpObservation { x: p[0], y: p[1] }).collect();
    for seed in 9500..9510u64 {
        let models = vec![
            GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 10).unwrap().with_noise_optimization(true),
            GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 10).unwrap().with_noise_optimization(true),
        ];
        let config = BeemConfig { max_iters: 15, seed, ..BeemConfig::default() };
        let fit = beem_fit(&obs, models, BeemInit::RandomSubsets, &config).unwrap();
        let purity = purity_acc(&Contingency::from_labels(&data.labels, &fit.report.labels).unwrap());
        let hp: Vec<String> = fit.models.iter()
            .map(|m| format!("(s2 {:.2} l {:.3} n {:.3})", m.kernel().output_variance, m.kernel().lengthscale, m.noise_variance()))
            .collect();
        // Crude picture: for curve-0 points in x order, print assigned model; uppercase = wrong
        let mut row = String::new();
        for (i, (_, &l)) in data.points.iter().zip(&data.labels).enumerate().filter(|(_, (_, &l))| l == 0) {
            let pred = fit.report.labels[i];
            let correct_map = pred == fit.report.labels[data.labels.iter().position(|&x| x == 0).unwrap()];
            let _ = (l, correct_map);
            row.push(if pred == 0 { 'a' } else { 'B' });
        }
        println!("seed {seed}: purity {purity:.3} {} curve0: {}", hp.join(" "), &row[..60.min(row.len())]);
    }
}
