//! Lloyd's algorithm with random or k-means++ seeding.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::BaselineError;
use crate::Point;

/// Center seeding strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KmeansInit {
    /// Distinct observations drawn uniformly.
    RandomPoints,
    /// k-means++: first center uniform, later centers proportional to the
    /// squared distance to the nearest chosen center.
    PlusPlus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansResult {
    pub centers: Vec<Point>,
    pub labels: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn seed_centers<R: Rng + ?Sized>(
    data: &[Point],
    k: usize,
    init: KmeansInit,
    rng: &mut R,
) -> Result<Vec<Point>, BaselineError> {
    match init {
        KmeansInit::RandomPoints => {
            let mut order: Vec<usize> = (0..data.len()).collect();
            order.shuffle(rng);
            let mut centers = Vec::with_capacity(k);
            for idx in order {
                if centers.iter().any(|c: &Point| sq_dist(c, &data[idx]) == 0.0) {
                    continue;
                }
                centers.push(data[idx].clone());
                if centers.len() == k {
                    return Ok(centers);
                }
            }
            Err(BaselineError::TooFewDistinctPoints { k })
        }
        KmeansInit::PlusPlus => {
            let mut centers: Vec<Point> = Vec::with_capacity(k);
            centers.push(data[rng.gen_range(0..data.len())].clone());
            let mut nearest: Vec<f64> = data.iter().map(|p| sq_dist(p, &centers[0])).collect();
            while centers.len() < k {
                let total: f64 = nearest.iter().sum();
                if total <= 0.0 {
                    return Err(BaselineError::TooFewDistinctPoints { k });
                }
                let mut u = rng.gen::<f64>() * total;
                let mut chosen = data.len() - 1;
                for (i, &d) in nearest.iter().enumerate() {
                    u -= d;
                    if u <= 0.0 && d > 0.0 {
                        chosen = i;
                        break;
                    }
                }
                centers.push(data[chosen].clone());
                for (i, p) in data.iter().enumerate() {
                    let d = sq_dist(p, centers.last().unwrap());
                    if d < nearest[i] {
                        nearest[i] = d;
                    }
                }
            }
            Ok(centers)
        }
    }
}

fn assign(data: &[Point], centers: &[Point]) -> (Vec<usize>, f64) {
    let mut labels = Vec::with_capacity(data.len());
    let mut inertia = 0.0;
    for p in data {
        let mut best = f64::INFINITY;
        let mut arg = 0;
        for (ci, c) in centers.iter().enumerate() {
            let d = sq_dist(p, c);
            if d < best {
                best = d;
                arg = ci;
            }
        }
        labels.push(arg);
        inertia += best;
    }
    (labels, inertia)
}

/// Lloyd iterations to an assignment fixed point (or `max_iters` update
/// rounds). An emptied cluster is re-seeded at the point farthest from its
/// currently assigned center.
pub fn kmeans(
    data: &[Point],
    k: usize,
    init: KmeansInit,
    max_iters: usize,
    seed: u64,
) -> Result<KmeansResult, BaselineError> {
    if data.is_empty() {
        return Err(BaselineError::EmptyData);
    }
    if data.len() < k || k == 0 {
        return Err(BaselineError::TooFewObservations { n: data.len(), k });
    }
    let dim = data[0].len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_centers(data, k, init, &mut rng)?;
    let (mut labels, mut inertia) = assign(data, &centers);
    let mut iterations = 0;

    for _ in 0..max_iters {
        // Update step.
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in data.iter().zip(&labels) {
            counts[l] += 1;
            for (j, &v) in p.iter().enumerate() {
                sums[l][j] += v;
            }
        }
        for ci in 0..k {
            if counts[ci] == 0 {
                // Re-seed at the point farthest from its assigned center.
                let far = (0..data.len())
                    .max_by(|&a, &b| {
                        sq_dist(&data[a], &centers[labels[a]])
                            .total_cmp(&sq_dist(&data[b], &centers[labels[b]]))
                    })
                    .expect("data is nonempty");
                centers[ci] = data[far].clone();
                labels[far] = ci;
            } else {
                for j in 0..dim {
                    centers[ci][j] = sums[ci][j] / counts[ci] as f64;
                }
            }
        }
        iterations += 1;

        let (new_labels, new_inertia) = assign(data, &centers);
        let stable = new_labels == labels;
        labels = new_labels;
        inertia = new_inertia;
        if stable {
            break;
        }
    }

    Ok(KmeansResult {
        centers,
        labels,
        inertia,
        iterations,
    })
}

/// Run `n_init` independently seeded attempts (seeds `seed + i`) and keep
/// the lowest-inertia result; ties break toward the lowest attempt index.
pub fn kmeans_best_of(
    data: &[Point],
    k: usize,
    init: KmeansInit,
    max_iters: usize,
    seed: u64,
    n_init: usize,
) -> Result<KmeansResult, BaselineError> {
    if n_init == 0 {
        return Err(BaselineError::InvalidConfig("n_init must be >= 1".into()));
    }
    let mut best: Option<KmeansResult> = None;
    for i in 0..n_init {
        let run = kmeans(data, k, init, max_iters, seed + i as u64)?;
        if best.as_ref().map_or(true, |b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_point_its_own_center_when_k_equals_n() {
        let data = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![5.0, 5.0]];
        let result = kmeans(&data, 3, KmeansInit::PlusPlus, 50, 1).unwrap();
        assert!(result.inertia < 1e-12);
        let mut sorted = result.labels.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn two_separated_pairs_yield_midpoint_centers() {
        let data = vec![
            vec![0.0, 0.0],
            vec![0.0, 2.0],
            vec![10.0, 0.0],
            vec![10.0, 2.0],
        ];
        let result = kmeans(&data, 2, KmeansInit::PlusPlus, 50, 3).unwrap();
        let mut centers = result.centers.clone();
        centers.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert!((centers[0][0] - 0.0).abs() < 1e-12);
        assert!((centers[0][1] - 1.0).abs() < 1e-12);
        assert!((centers[1][0] - 10.0).abs() < 1e-12);
        assert!((centers[1][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lloyd_never_increases_inertia() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let data: Vec<Point> = (0..80)
            .map(|_| vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])
            .collect();
        let initial = kmeans(&data, 4, KmeansInit::PlusPlus, 0, 7).unwrap();
        let converged = kmeans(&data, 4, KmeansInit::PlusPlus, 100, 7).unwrap();
        assert!(converged.inertia <= initial.inertia + 1e-12);
    }

    #[test]
    fn plus_plus_avoids_duplicate_centers() {
        // Many duplicates, exactly three distinct points.
        let mut data = Vec::new();
        for _ in 0..20 {
            data.push(vec![0.0, 0.0]);
            data.push(vec![1.0, 1.0]);
            data.push(vec![2.0, 0.0]);
        }
        let result = kmeans(&data, 3, KmeansInit::PlusPlus, 0, 5).unwrap();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!(sq_dist(&result.centers[i], &result.centers[j]) > 1e-12);
            }
        }
        // Asking for more centers than distinct points fails.
        assert!(matches!(
            kmeans(&data, 4, KmeansInit::PlusPlus, 0, 5),
            Err(BaselineError::TooFewDistinctPoints { .. })
        ));
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data: Vec<Point> = (0..50)
            .map(|_| vec![rng.gen_range(-3.0..3.0)])
            .collect();
        let a = kmeans(&data, 3, KmeansInit::RandomPoints, 30, 9).unwrap();
        let b = kmeans(&data, 3, KmeansInit::RandomPoints, 30, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_k_larger_than_n() {
        let data = vec![vec![0.0]];
        assert!(matches!(
            kmeans(&data, 2, KmeansInit::PlusPlus, 10, 0),
            Err(BaselineError::TooFewObservations { .. })
        ));
    }
}
