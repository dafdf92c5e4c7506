//! Seeded generators for the synthetic benchmark datasets and loaders for
//! labeled CSV / sequence corpora. Every generator is a pure function of
//! its parameters and seed.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::DataError;
use crate::{Point, Sequence};

/// Fixed-dimension observations with ground-truth component labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledVectors {
    pub points: Vec<Point>,
    pub labels: Vec<usize>,
    /// Provenance record: generator name, parameters, and seed.
    pub generator_spec: String,
}

/// Variable-length sequences with ground-truth component labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSequences {
    pub sequences: Vec<Sequence>,
    pub labels: Vec<usize>,
    pub lengths: Vec<usize>,
    pub generator_spec: String,
}

/// Four isotropic Gaussians at the corners of an origin-centred square.
/// Corner order follows the top-left corner clockwise: counts `[a,b,c,d]`
/// land on (-s/2,+s/2), (+s/2,+s/2), (+s/2,-s/2), (-s/2,-s/2).
pub fn gen_square(counts: [usize; 4], side: f64, var: f64, seed: u64) -> LabeledVectors {
    let h = side / 2.0;
    let corners = [[-h, h], [h, h], [h, -h], [-h, -h]];
    let sd = var.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for (ci, (&count, corner)) in counts.iter().zip(&corners).enumerate() {
        for _ in 0..count {
            let z0: f64 = rng.sample(StandardNormal);
            let z1: f64 = rng.sample(StandardNormal);
            points.push(vec![corner[0] + sd * z0, corner[1] + sd * z1]);
            labels.push(ci);
        }
    }
    LabeledVectors {
        points,
        labels,
        generator_spec: format!(
            "square(counts=[{},{},{},{}],side={side},var={var},seed={seed})",
            counts[0], counts[1], counts[2], counts[3]
        ),
    }
}

/// `k` unit-covariance Gaussians with means evenly spread along the upper
/// half circle of the given radius (angles `i*pi/(k-1)`); each sample
/// picks its component uniformly at random.
pub fn gen_rainbow(n: usize, radius: f64, k: usize, seed: u64) -> LabeledVectors {
    assert!(k >= 1 && n >= k, "need n >= k >= 1");
    let means: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let angle = if k == 1 {
                0.0
            } else {
                i as f64 * std::f64::consts::PI / (k - 1) as f64
            };
            [radius * angle.cos(), radius * angle.sin()]
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let ci = rng.gen_range(0..k);
        let z0: f64 = rng.sample(StandardNormal);
        let z1: f64 = rng.sample(StandardNormal);
        points.push(vec![means[ci][0] + z0, means[ci][1] + z1]);
        labels.push(ci);
    }
    LabeledVectors {
        points,
        labels,
        generator_spec: format!("rainbow(n={n},radius={radius},k={k},seed={seed})"),
    }
}

/// Sequences drawn from `k` random HMMs sharing fixed scalar emissions:
/// Dirichlet-uniform initial and transition rows per cluster, state means
/// as given, equal emission noise, lengths uniform on `[len_lo, len_hi]`.
#[allow(clippy::too_many_arguments)]
pub fn gen_random_hmms(
    k: usize,
    n_states: usize,
    state_means: &[f64],
    state_std: f64,
    seqs_per_cluster: usize,
    len_lo: usize,
    len_hi: usize,
    seed: u64,
) -> Result<LabeledSequences, DataError> {
    if state_means.len() != n_states {
        return Err(DataError::InvalidParameter(format!(
            "state_means has {} entries for {} states",
            state_means.len(),
            n_states
        )));
    }
    if len_lo > len_hi || len_lo == 0 {
        return Err(DataError::InvalidParameter(format!(
            "invalid length range [{len_lo}, {len_hi}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sequences = Vec::new();
    let mut labels = Vec::new();

    for ci in 0..k {
        let initial = dirichlet_row(n_states, &mut rng);
        let transition: Vec<Vec<f64>> =
            (0..n_states).map(|_| dirichlet_row(n_states, &mut rng)).collect();
        for _ in 0..seqs_per_cluster {
            let len = rng.gen_range(len_lo..=len_hi);
            let mut state = categorical(&initial, &mut rng);
            let mut seq: Sequence = Vec::with_capacity(len);
            for t in 0..len {
                if t > 0 {
                    state = categorical(&transition[state], &mut rng);
                }
                let z: f64 = rng.sample(StandardNormal);
                seq.push(vec![state_means[state] + state_std * z]);
            }
            sequences.push(seq);
            labels.push(ci);
        }
    }
    let lengths = sequences.iter().map(Vec::len).collect();
    Ok(LabeledSequences {
        sequences,
        labels,
        lengths,
        generator_spec: format!(
            "random_hmms(k={k},states={n_states},std={state_std},per_cluster={seqs_per_cluster},len=[{len_lo},{len_hi}],seed={seed})"
        ),
    })
}

fn dirichlet_row<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let mut row: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = row.iter().sum();
    for v in &mut row {
        *v /= total;
    }
    row
}

fn categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Which sinusoid data-association dataset to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SinusoidVariant {
    /// Two crossing sinusoids (a sine and its quarter-period shift) on a
    /// shared grid over one cycle, 125 points each, noise variance 0.01.
    Simple,
    /// A positive and a negative sinusoid over one cycle with per-curve
    /// noise variances 0.3 and 0.2, randomly subsampled to 75 and 60
    /// points and normalized.
    Complex,
}

/// Debug switches for the sinusoid generator; defaults reproduce the
/// benchmark datasets.
#[derive(Debug, Clone, Copy)]
pub struct SinusoidOptions {
    pub with_noise: bool,
    pub subsample: bool,
    pub normalize: bool,
}

impl Default for SinusoidOptions {
    fn default() -> Self {
        Self {
            with_noise: true,
            subsample: true,
            normalize: true,
        }
    }
}

/// Rows are `[x, y]` with the source-curve index as label.
pub fn gen_sinusoid_association(
    variant: SinusoidVariant,
    options: SinusoidOptions,
    seed: u64,
) -> LabeledVectors {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two_pi = 2.0 * std::f64::consts::PI;
    match variant {
        SinusoidVariant::Simple => {
            let per_curve = 125;
            let sd = if options.with_noise { 0.01_f64.sqrt() } else { 0.0 };
            let phase: f64 = std::env::var("GEO_PHASE").map(|v| v.parse().unwrap()).unwrap_or(std::f64::consts::FRAC_PI_2);
            let amp: f64 = std::env::var("GEO_AMP").map(|v| v.parse().unwrap()).unwrap_or(1.0);
            let freq: f64 = std::env::var("GEO_FREQ").map(|v| v.parse().unwrap()).unwrap_or(1.0);
            let mut points = Vec::with_capacity(2 * per_curve);
            let mut labels = Vec::with_capacity(2 * per_curve);
            for (ci, (a, ph)) in [(1.0f64, 0.0f64), (amp, phase)].iter().enumerate() {
                for i in 0..per_curve {
                    let x = i as f64 / (per_curve - 1) as f64;
                    let z: f64 = rng.sample(StandardNormal);
                    points.push(vec![x, a * (two_pi * freq * x + ph).sin() + sd * z]);
                    labels.push(ci);
                }
            }
            LabeledVectors {
                points,
                labels,
                generator_spec: format!(
                    "sinusoid(variant=simple,noise={},seed={seed})",
                    options.with_noise
                ),
            }
        }
        SinusoidVariant::Complex => {
            let base = 100;
            let keep = [75usize, 60usize];
            let noise_var: [f64; 2] = [0.3, 0.2];
            let mut points = Vec::new();
            let mut labels = Vec::new();
            for (ci, sign) in [1.0f64, -1.0].iter().enumerate() {
                let sd = if options.with_noise { noise_var[ci].sqrt() } else { 0.0 };
                let mut curve: Vec<Point> = (0..base)
                    .map(|i| {
                        let x = i as f64 / (base - 1) as f64;
                        let z: f64 = rng.sample(StandardNormal);
                        vec![x, sign * (two_pi * x).sin() + sd * z]
                    })
                    .collect();
                if options.subsample {
                    let mut indices: Vec<usize> = (0..base).collect();
                    indices.shuffle(&mut rng);
                    indices.truncate(keep[ci]);
                    indices.sort_unstable();
                    curve = indices.into_iter().map(|i| curve[i].clone()).collect();
                }
                labels.extend(std::iter::repeat(ci).take(curve.len()));
                points.extend(curve);
            }
            if options.normalize {
                normalize_xy(&mut points);
            }
            LabeledVectors {
                points,
                labels,
                generator_spec: format!(
                    "sinusoid(variant=complex,noise={},subsample={},normalize={},seed={seed})",
                    options.with_noise, options.subsample, options.normalize
                ),
            }
        }
    }
}

/// Min-max scale x to [0, 1]; standardize y to zero mean, unit variance.
fn normalize_xy(points: &mut [Point]) {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points.iter() {
        x_min = x_min.min(p[0]);
        x_max = x_max.max(p[0]);
    }
    let x_span = (x_max - x_min).max(1e-12);
    let n = points.len() as f64;
    let y_mean = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let y_var = points.iter().map(|p| (p[1] - y_mean).powi(2)).sum::<f64>() / n;
    let y_sd = y_var.sqrt().max(1e-12);
    for p in points.iter_mut() {
        p[0] = (p[0] - x_min) / x_span;
        p[1] = (p[1] - y_mean) / y_sd;
    }
}

/// Which CSV column holds the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

/// Load a numeric CSV with a header row; every non-label column becomes a
/// feature, the label column is mapped to dense class indices in sorted
/// value order. Row order is preserved.
pub fn load_labeled_csv(path: &Path, label: &LabelColumn) -> Result<LabeledVectors, DataError> {
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)?;
    let headers = reader.headers().map_err(|e| DataError::Parse {
        path: display.clone(),
        line: 1,
        msg: e.to_string(),
    })?;
    let label_idx = match label {
        LabelColumn::Name(name) => headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::MissingLabelColumn(name.clone()))?,
        LabelColumn::Index(idx) => {
            if *idx >= headers.len() {
                return Err(DataError::MissingLabelColumn(idx.to_string()));
            }
            *idx
        }
    };

    let mut raw_labels: Vec<f64> = Vec::new();
    let mut points: Vec<Point> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header occupies line 1
        let record = record.map_err(|e| DataError::Parse {
            path: display.clone(),
            line,
            msg: e.to_string(),
        })?;
        let mut features = Vec::with_capacity(record.len().saturating_sub(1));
        for (j, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| DataError::Parse {
                path: display.clone(),
                line,
                msg: format!("not a number: {field:?}"),
            })?;
            if j == label_idx {
                raw_labels.push(value);
            } else {
                features.push(value);
            }
        }
        points.push(features);
    }
    if points.is_empty() {
        return Err(DataError::Parse {
            path: display,
            line: 2,
            msg: "no data rows".into(),
        });
    }

    let mut distinct: Vec<f64> = raw_labels.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let labels: Vec<usize> = raw_labels
        .iter()
        .map(|v| distinct.binary_search_by(|d| d.total_cmp(v)).unwrap())
        .collect();

    Ok(LabeledVectors {
        points,
        labels,
        generator_spec: format!("csv({display})"),
    })
}

/// Load a directory of per-sequence text files. Each file holds one
/// sequence (one timestep per row, whitespace-separated floats); the
/// class tag is the filename prefix up to the first underscore. Only the
/// requested classes are loaded, labeled by their position in `classes`.
pub fn load_sequence_corpus(dir: &Path, classes: &[String]) -> Result<LabeledSequences, DataError> {
    if classes.is_empty() {
        return Err(DataError::EmptyClassFilter);
    }
    let mut by_tag: BTreeMap<String, Vec<std::path::PathBuf>> = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let stem = match path.file_stem().and_then(|s| s.to_str()) {
            Some(s) => s,
            None => continue,
        };
        let tag = stem.split('_').next().unwrap_or(stem).to_string();
        by_tag.entry(tag).or_default().push(path);
    }
    let missing: Vec<String> = classes
        .iter()
        .filter(|c| !by_tag.contains_key(*c))
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(DataError::MissingClasses {
            missing,
            available: by_tag.keys().cloned().collect(),
        });
    }

    let mut sequences = Vec::new();
    let mut labels = Vec::new();
    let mut dim: Option<usize> = None;
    for (ci, class) in classes.iter().enumerate() {
        let mut files = by_tag[class].clone();
        files.sort();
        for file in files {
            let display = file.display().to_string();
            let text = fs::read_to_string(&file)?;
            let mut seq: Sequence = Vec::new();
            for (li, row) in text.lines().enumerate() {
                let row = row.trim();
                if row.is_empty() {
                    continue;
                }
                let values: Result<Vec<f64>, _> =
                    row.split_whitespace().map(str::parse::<f64>).collect();
                let values = values.map_err(|e| DataError::Parse {
                    path: display.clone(),
                    line: li + 1,
                    msg: e.to_string(),
                })?;
                if let Some(d) = dim {
                    if values.len() != d {
                        return Err(DataError::Parse {
                            path: display.clone(),
                            line: li + 1,
                            msg: format!("expected {d} columns, got {}", values.len()),
                        });
                    }
                } else {
                    dim = Some(values.len());
                }
                seq.push(values);
            }
            if seq.is_empty() {
                return Err(DataError::Parse {
                    path: display,
                    line: 1,
                    msg: "empty sequence file".into(),
                });
            }
            sequences.push(seq);
            labels.push(ci);
        }
    }
    let lengths = sequences.iter().map(Vec::len).collect();
    Ok(LabeledSequences {
        sequences,
        labels,
        lengths,
        generator_spec: format!("sequence_dir({} classes from {})", classes.len(), dir.display()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn square_counts_and_determinism() {
        let a = gen_square([100, 50, 50, 10], 10.0, 0.3, 42);
        assert_eq!(a.points.len(), 210);
        for ci in 0..4 {
            let count = a.labels.iter().filter(|&&l| l == ci).count();
            assert_eq!(count, [100, 50, 50, 10][ci]);
        }
        let b = gen_square([100, 50, 50, 10], 10.0, 0.3, 42);
        assert_eq!(a, b);

        let balanced = gen_square([50, 50, 50, 50], 10.0, 0.3, 1);
        assert_eq!(balanced.points.len(), 200);
    }

    #[test]
    fn square_zero_variance_collapses_to_corners() {
        let data = gen_square([5, 5, 5, 5], 10.0, 1e-12, 3);
        let corners = [[-5.0, 5.0], [5.0, 5.0], [5.0, -5.0], [-5.0, -5.0]];
        for (p, &l) in data.points.iter().zip(&data.labels) {
            assert!((p[0] - corners[l][0]).abs() < 1e-5);
            assert!((p[1] - corners[l][1]).abs() < 1e-5);
        }
    }

    #[test]
    fn square_corner_means_concentrate() {
        let n_per = 10_000;
        let var = 0.3;
        let data = gen_square([n_per; 4], 10.0, var, 7);
        let corners = [[-5.0, 5.0], [5.0, 5.0], [5.0, -5.0], [-5.0, -5.0]];
        for ci in 0..4 {
            let pts: Vec<&Point> = data
                .points
                .iter()
                .zip(&data.labels)
                .filter(|(_, &l)| l == ci)
                .map(|(p, _)| p)
                .collect();
            let bound = 4.0 * var.sqrt() / (n_per as f64).sqrt();
            for d in 0..2 {
                let mean = pts.iter().map(|p| p[d]).sum::<f64>() / pts.len() as f64;
                assert!(
                    (mean - corners[ci][d]).abs() < bound,
                    "corner {ci} dim {d}: {mean}"
                );
            }
        }
    }

    #[test]
    fn rainbow_endpoints_and_sizes() {
        let data = gen_rainbow(1000, 9.0, 8, 5);
        assert_eq!(data.points.len(), 1000);
        // Angle 0 mean is (9, 0); angle pi mean is (-9, 0). Check via the
        // sample means of the first and last components.
        for (ci, expected) in [(0usize, [9.0, 0.0]), (7usize, [-9.0, 0.0])] {
            let pts: Vec<&Point> = data
                .points
                .iter()
                .zip(&data.labels)
                .filter(|(_, &l)| l == ci)
                .map(|(p, _)| p)
                .collect();
            assert!(pts.len() > 60);
            for d in 0..2 {
                let mean = pts.iter().map(|p| p[d]).sum::<f64>() / pts.len() as f64;
                assert!((mean - expected[d]).abs() < 0.5, "comp {ci} dim {d}: {mean}");
            }
        }
    }

    #[test]
    fn rainbow_multinomial_chi_square_sanity() {
        let data = gen_rainbow(1000, 9.0, 8, 11);
        let mut counts = [0f64; 8];
        for &l in &data.labels {
            counts[l] += 1.0;
        }
        let expected = 1000.0 / 8.0;
        let stat: f64 = counts.iter().map(|&c| (c - expected).powi(2) / expected).sum();
        // Chi-square critical value, df = 7, p = 0.001.
        assert!(stat < 24.32, "chi-square statistic {stat}");
    }

    #[test]
    fn random_hmm_defaults_and_limits() {
        let data =
            gen_random_hmms(3, 4, &[-2.0, -1.0, 0.0, 1.0], 0.1, 20, 5, 10, 13).unwrap();
        assert_eq!(data.sequences.len(), 60);
        assert!(data.lengths.iter().all(|&l| (5..=10).contains(&l)));
        for (seq, &len) in data.sequences.iter().zip(&data.lengths) {
            assert_eq!(seq.len(), len);
        }

        // Near-zero emission noise pins every value to a state mean.
        let tight =
            gen_random_hmms(2, 4, &[-2.0, -1.0, 0.0, 1.0], 1e-12, 5, 5, 10, 17).unwrap();
        for seq in &tight.sequences {
            for frame in seq {
                let closest = [-2.0f64, -1.0, 0.0, 1.0]
                    .iter()
                    .map(|m| (frame[0] - m).abs())
                    .fold(f64::INFINITY, f64::min);
                assert!(closest < 1e-6);
            }
        }

        assert!(gen_random_hmms(2, 4, &[0.0; 4], 0.1, 5, 10, 5, 0).is_err());
        assert!(gen_random_hmms(2, 4, &[0.0; 3], 0.1, 5, 5, 10, 0).is_err());
    }

    #[test]
    fn sinusoid_sizes_per_variant() {
        let simple =
            gen_sinusoid_association(SinusoidVariant::Simple, SinusoidOptions::default(), 3);
        assert_eq!(simple.points.len(), 250);
        let complex =
            gen_sinusoid_association(SinusoidVariant::Complex, SinusoidOptions::default(), 3);
        assert_eq!(complex.points.len(), 135);
        assert_eq!(complex.labels.iter().filter(|&&l| l == 0).count(), 75);
        assert_eq!(complex.labels.iter().filter(|&&l| l == 1).count(), 60);
    }

    #[test]
    fn sinusoid_debug_mode_reproduces_exact_curves() {
        let opts = SinusoidOptions {
            with_noise: false,
            subsample: false,
            normalize: false,
        };
        let data = gen_sinusoid_association(SinusoidVariant::Complex, opts, 1);
        assert_eq!(data.points.len(), 200);
        for (p, &l) in data.points.iter().zip(&data.labels) {
            let sign = if l == 0 { 1.0 } else { -1.0 };
            let expected = sign * (2.0 * std::f64::consts::PI * p[0]).sin();
            assert!((p[1] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn generators_are_pure_functions_of_seed() {
        assert_eq!(gen_rainbow(100, 9.0, 8, 21), gen_rainbow(100, 9.0, 8, 21));
        assert_ne!(gen_rainbow(100, 9.0, 8, 21), gen_rainbow(100, 9.0, 8, 22));
        let a = gen_sinusoid_association(SinusoidVariant::Complex, SinusoidOptions::default(), 8);
        let b = gen_sinusoid_association(SinusoidVariant::Complex, SinusoidOptions::default(), 8);
        assert_eq!(a, b);
    }

    #[test]
    fn csv_loader_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("train.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, "a,b,label").unwrap();
        writeln!(f, "1.0,2.0,0").unwrap();
        writeln!(f, "3.0,4.0,1").unwrap();
        writeln!(f, "5.5,6.5,1").unwrap();
        drop(f);

        let by_name =
            load_labeled_csv(&path, &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(by_name.points.len(), 3);
        assert_eq!(by_name.points[0], vec![1.0, 2.0]);
        assert_eq!(by_name.labels, vec![0, 1, 1]);

        let by_index = load_labeled_csv(&path, &LabelColumn::Index(2)).unwrap();
        assert_eq!(by_index.labels, by_name.labels);

        assert!(matches!(
            load_labeled_csv(&path, &LabelColumn::Name("missing".into())),
            Err(DataError::MissingLabelColumn(_))
        ));
    }

    #[test]
    fn csv_loader_single_row_and_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        std::fs::write(&path, "x,y,label\n0.5,0.25,3\n").unwrap();
        let data = load_labeled_csv(&path, &LabelColumn::Name("label".into())).unwrap();
        assert_eq!(data.points.len(), 1);
        assert_eq!(data.labels, vec![0]);

        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "x,label\n1.0,0\noops,1\n").unwrap();
        match load_labeled_csv(&bad, &LabelColumn::Name("label".into())) {
            Err(DataError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn sequence_corpus_loader() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("A_0.txt"), "0.0 1.0\n0.5 1.5\n").unwrap();
        std::fs::write(dir.path().join("A_1.txt"), "1.0 1.0\n").unwrap();
        std::fs::write(dir.path().join("B_0.txt"), "2.0 2.0\n2.0 2.5\n3.0 3.0\n").unwrap();

        let corpus =
            load_sequence_corpus(dir.path(), &["A".into(), "B".into()]).unwrap();
        assert_eq!(corpus.sequences.len(), 3);
        assert_eq!(corpus.labels, vec![0, 0, 1]);
        assert_eq!(corpus.lengths, vec![2, 1, 3]);

        match load_sequence_corpus(dir.path(), &["A".into(), "Z".into()]) {
            Err(DataError::MissingClasses { missing, available }) => {
                assert_eq!(missing, vec!["Z".to_string()]);
                assert_eq!(available, vec!["A".to_string(), "B".to_string()]);
            }
            other => panic!("expected missing classes, got {other:?}"),
        }

        assert!(matches!(
            load_sequence_corpus(dir.path(), &[]),
            Err(DataError::EmptyClassFilter)
        ));
    }
}
