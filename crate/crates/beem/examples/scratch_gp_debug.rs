use beem::datagen::{gen_sinusoid_association, SinusoidOptions, SinusoidVariant};
use beem::engine::{beem_fit, BeemConfig, BeemInit};
use beem::metrics::{purity_acc, Contingency};
use beem::models::{GpObservation, GpRegressor, KernelSpec};

fn acc(t: &[usize], p: &[usize]) -> f64 { purity_acc(&Contingency::from_labels(t, p).unwrap()) }

fn main() {
    let data = gen_sinusoid_association(SinusoidVariant::Simple, SinusoidOptions::default(), 77);
    let obs: Vec<GpObservation> = data.points.iter().map(|p| GpObservation { x: p[0], y: p[1] }).collect();
    let models = vec![
        GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 10).unwrap(),
        GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 10).unwrap(),
    ];
    let config = BeemConfig { max_iters: 15, seed: 9501, ..BeemConfig::default() };
    let fit = beem_fit(&obs, models, BeemInit::RandomSubsets, &config).unwrap();
    for t in 0..fit.report.em_steps {
        println!(
            "iter {:2}: tau {:.3} sizes {:?} cll {:9.2} purity {:.3}",
            t + 1,
            fit.report.temp_trace[t],
            fit.report.size_trace[t],
            fit.report.loglik_trace[t],
            acc(&data.labels, &fit.report.label_trace[t]),
        );
    }
    for (i, m) in fit.models.iter().enumerate() {
        println!(
            "model {i}: sigma2 {:.4} len {:.4} n_train {}",
            m.kernel().output_variance,
            m.kernel().lengthscale,
            m.training_len()
        );
    }
    println!("final greedy purity {:.3}", acc(&data.labels, &fit.report.labels));
    // What does a single GP fitted on ONE true curve look like?
    let mut gp = GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 25).unwrap();
    let xs: Vec<f64> = data.points.iter().zip(&data.labels).filter(|(_, &l)| l == 0).map(|(p, _)| p[0]).collect();
    let ys: Vec<f64> = data.points.iter().zip(&data.labels).filter(|(_, &l)| l == 0).map(|(p, _)| p[1]).collect();
    gp.set_training(xs, ys).unwrap();
    let lml0 = gp.log_marginal_likelihood().unwrap();
    gp.fit_hyperparams(25).unwrap();
    println!(
        "oracle-fit GP on curve 0: lml {:.1} -> {:.1}, sigma2 {:.4} len {:.4}",
        lml0, gp.log_marginal_likelihood().unwrap(), gp.kernel().output_variance, gp.kernel().lengthscale
    );
    // Separation: mean predictive ll of own-curve points vs other-curve points
    let mut own = 0.0; let mut other = 0.0; let (mut n0, mut n1) = (0.0, 0.0);
    for (p, &l) in data.points.iter().zip(&data.labels) {
        let ll = gp.log_predictive(p[0], p[1]);
        if l == 0 { own += ll; n0 += 1.0; } else { other += ll; n1 += 1.0; }
    }
    println!("oracle GP: mean ll own {:.2} vs other {:.2}", own / n0, other / n1);
}
