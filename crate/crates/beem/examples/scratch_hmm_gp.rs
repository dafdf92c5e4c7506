use beem::baselines::{em_fit_mhmm, random_hmm_components, smyth_init, MhmmEmConfig};
use beem::datagen::{gen_random_hmms, gen_sinusoid_association, SinusoidOptions, SinusoidVariant};
use beem::engine::{beem_fit, BeemConfig, BeemInit};
use beem::metrics::{purity_acc, Contingency};
use beem::models::{GpObservation, GpRegressor, KernelSpec};
use std::time::Instant;

fn acc(truth: &[usize], pred: &[usize]) -> f64 {
    purity_acc(&Contingency::from_labels(truth, pred).unwrap())
}

fn stats(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / n).sqrt();
    (m, sd)
}

fn hmm_block(len_lo: usize, len_hi: usize, repeats: u64) {
    let t0 = Instant::now();
    let mut beem_accs = Vec::new();
    let mut em_accs = Vec::new();
    let mut smyth_accs = Vec::new();
    for r in 0..repeats {
        let data = gen_random_hmms(3, 4, &[-2.0, -1.0, 0.0, 1.0], 0.1, 20, len_lo, len_hi, 500 + r).unwrap();
        // BEEM A
        let models = random_hmm_components(&data.sequences, 3, 4, 9100 + r).unwrap();
        let config = BeemConfig { seed: 9100 + r, ..BeemConfig::default() };
        let fit = beem_fit(&data.sequences, models, BeemInit::RandomSubsets, &config).unwrap();
        beem_accs.push(acc(&data.labels, &fit.report.labels));
        // EM A
        let models = random_hmm_components(&data.sequences, 3, 4, 9200 + r).unwrap();
        let fit = em_fit_mhmm(&data.sequences, models, &MhmmEmConfig::default()).unwrap();
        em_accs.push(acc(&data.labels, &fit.report.labels));
        // EM Smyth
        let models = smyth_init(&data.sequences, 3, 4, 10, 9300 + r).unwrap();
        let fit = em_fit_mhmm(&data.sequences, models, &MhmmEmConfig::default()).unwrap();
        smyth_accs.push(acc(&data.labels, &fit.report.labels));
    }
    let (bm, bs) = stats(&beem_accs);
    let (em, es) = stats(&em_accs);
    let (sm, ss) = stats(&smyth_accs);
    println!("HMM L[{len_lo},{len_hi}]: BEEM {bm:.3} ({bs:.3})  EM/A {em:.3} ({es:.3})  EM/Smyth {sm:.3} ({ss:.3})  [{:.1?}]", t0.elapsed());
}

fn gp_block(repeats: u64) {
    let t0 = Instant::now();
    let data = gen_sinusoid_association(SinusoidVariant::Simple, SinusoidOptions::default(), 77);
    let obs: Vec<GpObservation> = data.points.iter().map(|p| GpObservation { x: p[0], y: p[1] }).collect();
    let mut finals = Vec::new();
    let mut firsts = Vec::new();
    let mut final_trace_purities = Vec::new();
    for r in 0..repeats {
        let models = vec![
            GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 10).unwrap(),
            GpRegressor::new(KernelSpec::rbf(1.0, 1.0), 0.01, 10).unwrap(),
        ];
        let config = BeemConfig { max_iters: 15, seed: 9500 + r, ..BeemConfig::default() };
        let fit = beem_fit(&obs, models, BeemInit::RandomSubsets, &config).unwrap();
        finals.push(acc(&data.labels, &fit.report.labels));
        firsts.push(acc(&data.labels, &fit.report.label_trace[0]));
        final_trace_purities.push(acc(&data.labels, fit.report.label_trace.last().unwrap()));
    }
    let (fm, fs) = stats(&finals);
    let (im, _) = stats(&firsts);
    let (tm, _) = stats(&final_trace_purities);
    println!("GP simple: final greedy purity {fm:.3} ({fs:.3})  trace update1 {im:.3} -> final update {tm:.3}  [{:.1?}]", t0.elapsed());
}

fn main() {
    hmm_block(20, 50, 15);
    hmm_block(5, 10, 15);
    gp_block(10);
}
