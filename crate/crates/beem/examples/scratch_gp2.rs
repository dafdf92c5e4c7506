use beem::datagen::{gen_sinusoid_association, SinusoidOptions, SinusoidVariant};
use beem::engine::{beem_fit, BeemConfig, BeemInit};
use beem::metrics::{purity_acc, Contingency};
use beem::baselines::{kmeans_best_of, KmeansInit};
use beem::models::{GpObservation, GpRegressor, KernelSpec};

fn acc(t: &[usize], p: &[usize]) -> f64 { purity_acc(&Contingency::from_labels(t, p).unwrap()) }

fn main() {
    let step: f64 = std::env::var("STEP").map(|v| v.parse().unwrap()).unwrap_or(0.5);
    let len0: f64 = std::env::var("LEN0").map(|v| v.parse().unwrap()).unwrap_or(1.0);
    let budget: usize = std::env::var("BUDGET").map(|v| v.parse().unwrap()).unwrap_or(10);
    let data = gen_sinusoid_association(SinusoidVariant::Simple, SinusoidOptions::default(), 77);
    let obs: Vec<GpObservation> = data.points.iter().map(|p| GpObservation { x: p[0], y: p[1] }).collect();
    let mut finals = Vec::new();
    let mut firsts = Vec::new();
    let mut lasts = Vec::new();
    for r in 0..30u64 {
        let opt_noise = std::env::var("OPTNOISE").is_ok();
        let len1: f64 = std::env::var("LEN1").map(|v| v.parse().unwrap()).unwrap_or(len0);
        let models = vec![
            GpRegressor::new(KernelSpec::rbf(1.0, len0), 0.01, budget).unwrap().with_search_step(step).with_noise_optimization(opt_noise),
            GpRegressor::new(KernelSpec::rbf(1.0, len1), 0.01, budget).unwrap().with_search_step(step).with_noise_optimization(opt_noise),
        ];
        let iters: usize = std::env::var("ITERS").map(|v| v.parse().unwrap()).unwrap_or(15);
        let config = BeemConfig { max_iters: iters, seed: 9500 + r, ..BeemConfig::default() };
        let fit = if std::env::var("KMINIT").is_ok() {
            let km = kmeans_best_of(&data.points, 2, KmeansInit::PlusPlus, 50, 9500 + r, 5).unwrap();
            let mut warm = models;
            for ci in 0..2 {
                let subset: Vec<GpObservation> = obs
                    .iter()
                    .zip(&km.labels)
                    .filter(|(_, &l)| l == ci)
                    .map(|(o, _)| *o)
                    .collect();
                let refs: Vec<&GpObservation> = subset.iter().collect();
                use beem::engine::BaseModel;
                warm[ci].fit(&refs).unwrap();
            }
            beem_fit(&obs, warm, BeemInit::Warm, &config).unwrap()
        } else {
            beem_fit(&obs, models, BeemInit::RandomSubsets, &config).unwrap()
        };
        finals.push(acc(&data.labels, &fit.report.labels));
        firsts.push(acc(&data.labels, &fit.report.label_trace[0]));
        lasts.push(acc(&data.labels, fit.report.label_trace.last().unwrap()));
    }
    let m = |v: &Vec<f64>| v.iter().sum::<f64>() / v.len() as f64;
    println!("step {step} len0 {len0} budget {budget}: greedy {:.3}  update1 {:.3} -> last {:.3}", m(&finals), m(&firsts), m(&lasts));
}
