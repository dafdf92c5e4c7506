use beem::models::GaussianHmm;
use beem::metrics::{purity_acc, Contingency};
use beem::Sequence;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn dirichlet_row<R: Rng>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0f64 - rng.gen::<f64>()).ln()).collect();
    let t: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= t);
    row
}

fn cat<R: Rng>(p: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &x) in p.iter().enumerate() { acc += x; if u < acc { return i; } }
    p.len() - 1
}

fn main() {
    let means = [-2.0, -1.0, 0.0, 1.0];
    let std = 0.1;
    for (lo, hi) in [(20usize, 50usize), (5, 10)] {
        let mut accs = Vec::new();
        for rep in 0..15u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(700 + rep);
            // Build 3 true HMMs
            let mut hmms = Vec::new();
            for _ in 0..3 {
                let init = DVector::from_vec(dirichlet_row(4, &mut rng));
                let mut trans = DMatrix::zeros(4, 4);
                for r in 0..4 {
                    let row = dirichlet_row(4, &mut rng);
                    for (c, v) in row.into_iter().enumerate() { trans[(r, c)] = v; }
                }
                let m = DMatrix::from_fn(4, 1, |r, _| means[r]);
                let v = DMatrix::from_element(4, 1, std * std);
                hmms.push(GaussianHmm::new(init, trans, m, v).unwrap());
            }
            // Draw sequences from each, classify with TRUE models
            let mut truth = Vec::new();
            let mut pred = Vec::new();
            for (ci, hmm) in hmms.iter().enumerate() {
                for _ in 0..20 {
                    let len = rng.gen_range(lo..=hi);
                    let mut state = cat(hmm.initial().as_slice(), &mut rng);
                    let mut seq: Sequence = Vec::new();
                    for t in 0..len {
                        if t > 0 {
                            let row: Vec<f64> = (0..4).map(|j| hmm.transition()[(state, j)]).collect();
                            state = cat(&row, &mut rng);
                        }
                        let z: f64 = rng.sample(StandardNormal);
                        seq.push(vec![means[state] + std * z]);
                    }
                    truth.push(ci);
                    let lls: Vec<f64> = hmms.iter().map(|h| h.forward_loglik(&seq).unwrap()).collect();
                    let best = lls.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
                    pred.push(best);
                }
            }
            accs.push(purity_acc(&Contingency::from_labels(&truth, &pred).unwrap()));
        }
        let m = accs.iter().sum::<f64>() / accs.len() as f64;
        println!("oracle ACC L[{lo},{hi}]: {m:.3}");
    }
}
