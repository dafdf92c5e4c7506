use beem::baselines::{em_fit_mhmm, kmeans, KmeansInit, MhmmEmConfig};
use beem::datagen::gen_random_hmms;
use beem::engine::{beem_fit, BeemConfig, BeemInit};
use beem::metrics::{purity_acc, Contingency};
use beem::models::GaussianHmm;
use beem::Sequence;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn acc(t: &[usize], p: &[usize]) -> f64 { purity_acc(&Contingency::from_labels(t, p).unwrap()) }

fn dirichlet_row<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0f64 - rng.gen::<f64>()).ln()).collect();
    let t: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= t);
    row
}

/// Emission structure via k-means on pooled frames; random pi/A rows.
fn kmeans_frame_init(seqs: &[Sequence], k: usize, n_states: usize, seed: u64) -> Vec<GaussianHmm> {
    let frames: Vec<Vec<f64>> = seqs.iter().flatten().cloned().collect();
    let km = kmeans(&frames, n_states, KmeansInit::PlusPlus, 50, seed).unwrap();
    let dim = frames[0].len();
    let mut vars = vec![vec![0.0; dim]; n_states];
    let mut counts = vec![0usize; n_states];
    for (f, &l) in frames.iter().zip(&km.labels) {
        counts[l] += 1;
        for j in 0..dim {
            let d = f[j] - km.centers[l][j];
            vars[l][j] += d * d;
        }
    }
    let inflate: f64 = std::env::var("INFLATE").map(|v| v.parse().unwrap()).unwrap_or(1.0);
    let use_pooled = std::env::var("POOLED").is_ok();
    if use_pooled {
        let n = frames.len() as f64;
        let mut mean = vec![0.0; dim];
        for f in &frames { for j in 0..dim { mean[j] += f[j]; } }
        for m in &mut mean { *m /= n; }
        let mut pooled = vec![0.0; dim];
        for f in &frames { for j in 0..dim { let d = f[j] - mean[j]; pooled[j] += d * d; } }
        for v in &mut pooled { *v = (*v / n).max(1e-6); }
        for s in 0..n_states { for j in 0..dim { vars[s][j] = pooled[j]; } }
    } else {
        for s in 0..n_states {
            for j in 0..dim {
                vars[s][j] = (inflate * vars[s][j] / counts[s].max(1) as f64).max(1e-6);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| {
            let init = DVector::from_vec(dirichlet_row(n_states, &mut rng));
            let mut trans = DMatrix::zeros(n_states, n_states);
            for r in 0..n_states {
                let row = dirichlet_row(n_states, &mut rng);
                for (c, v) in row.into_iter().enumerate() { trans[(r, c)] = v; }
            }
            let (m, v) = if let Ok(fixed) = std::env::var("FIXEDVAR") {
                let fv: f64 = fixed.parse().unwrap();
                let m = DMatrix::from_fn(n_states, dim, |r, c| km.centers[r][c]);
                (m, DMatrix::from_element(n_states, dim, fv))
            } else {
                (
                    DMatrix::from_fn(n_states, dim, |r, c| km.centers[r][c]),
                    DMatrix::from_fn(n_states, dim, |r, c| vars[r][c]),
                )
            };
            let floor: f64 = std::env::var("FLOOR").map(|x| x.parse().unwrap()).unwrap_or(1e-6);
            GaussianHmm::new(init, trans, m, v).unwrap().with_var_floor(floor)
        })
        .collect()
}

fn main() {
    for (lo, hi) in [(20usize, 50usize), (5, 10)] {
        let mut beem_accs = Vec::new();
        let mut em_accs = Vec::new();
        for r in 0..45u64 {
            let data = gen_random_hmms(3, 4, &[-2.0, -1.0, 0.0, 1.0], 0.1, 20, lo, hi, 500 + r).unwrap();
            let budget: usize = std::env::var("BUDGET").map(|v| v.parse().unwrap()).unwrap_or(10);
            let models: Vec<GaussianHmm> = kmeans_frame_init(&data.sequences, 3, 4, 9100 + r)
                .into_iter()
                .map(|m| m.with_fit_budget(budget, 1e-4))
                .collect();
            let config = BeemConfig { seed: 9100 + r, ..BeemConfig::default() };
            let fit = beem_fit(&data.sequences, models, BeemInit::RandomSubsets, &config).unwrap();
            if r < 5 { eprintln!("  short/long run {r}: beem steps {}", fit.report.em_steps); }
            beem_accs.push(acc(&data.labels, &fit.report.labels));

            let models = kmeans_frame_init(&data.sequences, 3, 4, 9200 + r);
            let tol: f64 = std::env::var("EMTOL").map(|x| x.parse().unwrap()).unwrap_or(1e-4);
            let cfg = MhmmEmConfig { tol: tol * data.sequences.len() as f64, ..MhmmEmConfig::default() };
            let fit = em_fit_mhmm(&data.sequences, models, &cfg).unwrap();
            em_accs.push(acc(&data.labels, &fit.report.labels));
        }
        let n = beem_accs.len() as f64;
        let bm = beem_accs.iter().sum::<f64>() / n;
        let em = em_accs.iter().sum::<f64>() / n;
        let mut sorted = beem_accs.clone();
        sorted.sort_by(f64::total_cmp);
        println!("L[{lo},{hi}] kmeans-frame init: BEEM {bm:.3}  EM/A {em:.3}");
        println!("  BEEM per-instance: {:?}", sorted.iter().map(|v| (v * 100.0).round() / 100.0).collect::<Vec<_>>());
    }
}
