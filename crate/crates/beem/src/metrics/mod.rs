//! External clustering evaluation: purity/ACC, ARI, NMI, homogeneity, and
//! ROC/AUROC. All label metrics are computed from the class-by-cluster
//! contingency table and are invariant to relabeling either argument.

mod assignment;

use std::collections::BTreeMap;

use crate::error::MetricsError;

use assignment::max_matching_weight;

/// Cross-tabulation of true classes (rows) against predicted clusters
/// (columns), the shared sufficient statistic of the label metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contingency {
    table: Vec<Vec<usize>>,
    row_marginals: Vec<usize>,
    col_marginals: Vec<usize>,
    n: usize,
}

impl Contingency {
    /// Exact cross-tabulation of two equally long labelings. Label values
    /// are arbitrary; they are mapped to dense indices in sorted order.
    pub fn from_labels(true_labels: &[usize], pred_labels: &[usize]) -> Result<Self, MetricsError> {
        if true_labels.len() != pred_labels.len() {
            return Err(MetricsError::LengthMismatch {
                truth: true_labels.len(),
                pred: pred_labels.len(),
            });
        }
        if true_labels.is_empty() {
            return Err(MetricsError::EmptyLabels);
        }
        let row_ids = dense_ids(true_labels);
        let col_ids = dense_ids(pred_labels);
        let mut table = vec![vec![0usize; col_ids.len()]; row_ids.len()];
        for (&t, &p) in true_labels.iter().zip(pred_labels) {
            table[row_ids[&t]][col_ids[&p]] += 1;
        }
        Self::from_table(table)
    }

    /// Build from an explicit table of counts.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, MetricsError> {
        if table.is_empty() || table[0].is_empty() {
            return Err(MetricsError::EmptyLabels);
        }
        let cols = table[0].len();
        if table.iter().any(|r| r.len() != cols) {
            return Err(MetricsError::LengthMismatch {
                truth: cols,
                pred: table.iter().map(Vec::len).max().unwrap_or(0),
            });
        }
        let row_marginals: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
        let col_marginals: Vec<usize> = (0..cols)
            .map(|j| table.iter().map(|r| r[j]).sum())
            .collect();
        let n = row_marginals.iter().sum();
        if n == 0 {
            return Err(MetricsError::EmptyLabels);
        }
        Ok(Self {
            table,
            row_marginals,
            col_marginals,
            n,
        })
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_classes(&self) -> usize {
        self.table.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.table[0].len()
    }
}

fn dense_ids(labels: &[usize]) -> BTreeMap<usize, usize> {
    let mut distinct: Vec<usize> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    distinct.into_iter().enumerate().map(|(i, l)| (l, i)).collect()
}

/// Clustering purity (ACC): the fraction of observations covered by the
/// best one-to-one matching between clusters and classes. When the side
/// counts differ, unmatched rows or columns contribute zero.
pub fn purity_acc(cont: &Contingency) -> f64 {
    let weights: Vec<Vec<f64>> = cont
        .table
        .iter()
        .map(|row| row.iter().map(|&c| c as f64).collect())
        .collect();
    max_matching_weight(&weights) / cont.n as f64
}

fn comb2(x: usize) -> f64 {
    let x = x as f64;
    x * (x - 1.0) / 2.0
}

/// Adjusted Rand index. A degenerate denominator (single class and single
/// cluster, or two all-singleton partitions) returns 1.0 by convention.
pub fn ari(cont: &Contingency) -> f64 {
    let index: f64 = cont
        .table
        .iter()
        .flat_map(|row| row.iter())
        .map(|&c| comb2(c))
        .sum();
    let sum_rows: f64 = cont.row_marginals.iter().map(|&a| comb2(a)).sum();
    let sum_cols: f64 = cont.col_marginals.iter().map(|&b| comb2(b)).sum();
    let total_pairs = comb2(cont.n);
    if total_pairs == 0.0 {
        return 1.0;
    }
    let expected = sum_rows * sum_cols / total_pairs;
    let max_index = 0.5 * (sum_rows + sum_cols);
    let denom = max_index - expected;
    if denom.abs() < 1e-12 {
        return 1.0;
    }
    (index - expected) / denom
}

fn entropy(marginals: &[usize], n: usize) -> f64 {
    let n = n as f64;
    marginals
        .iter()
        .filter(|&&m| m > 0)
        .map(|&m| {
            let p = m as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information with geometric-mean normalization,
/// natural logs, and `0 ln 0 = 0`. Two zero-entropy marginals give 1.0;
/// exactly one gives 0.0 (documented conventions).
pub fn nmi(cont: &Contingency) -> f64 {
    let h_true = entropy(&cont.row_marginals, cont.n);
    let h_pred = entropy(&cont.col_marginals, cont.n);
    if h_true == 0.0 && h_pred == 0.0 {
        return 1.0;
    }
    if h_true == 0.0 || h_pred == 0.0 {
        return 0.0;
    }
    let n = cont.n as f64;
    let mut mi = 0.0;
    for (i, row) in cont.table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let pij = c as f64 / n;
            let pi = cont.row_marginals[i] as f64 / n;
            let pj = cont.col_marginals[j] as f64 / n;
            mi += pij * (pij / (pi * pj)).ln();
        }
    }
    (mi / (h_true * h_pred).sqrt()).clamp(0.0, 1.0)
}

/// Homogeneity score `1 - H(C|K)/H(C)`; returns 1.0 when the class
/// entropy is zero.
pub fn homogeneity(cont: &Contingency) -> f64 {
    let h_class = entropy(&cont.row_marginals, cont.n);
    if h_class == 0.0 {
        return 1.0;
    }
    let n = cont.n as f64;
    let mut h_cond = 0.0;
    for row in &cont.table {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let pij = c as f64 / n;
            let pj = cont.col_marginals[j] as f64 / n;
            h_cond -= pij * (pij / pj).ln();
        }
    }
    (1.0 - h_cond / h_class).clamp(0.0, 1.0)
}

/// One operating point of a ROC curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub threshold: f64,
    pub false_positive_rate: f64,
    pub true_positive_rate: f64,
}

/// ROC curve and AUROC for real-valued class-1 membership scores.
/// Thresholds sweep the sorted unique scores; tied scores advance the
/// curve jointly, so the trapezoidal AUROC credits ties with one half.
pub fn roc_auroc(
    scores: &[f64],
    true_binary: &[bool],
) -> Result<(Vec<RocPoint>, f64), MetricsError> {
    if scores.len() != true_binary.len() {
        return Err(MetricsError::LengthMismatch {
            truth: true_binary.len(),
            pred: scores.len(),
        });
    }
    if scores.is_empty() {
        return Err(MetricsError::EmptyLabels);
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(MetricsError::NonFiniteScore);
    }
    let positives = true_binary.iter().filter(|&&b| b).count();
    let negatives = true_binary.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(MetricsError::SingleClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut curve = vec![RocPoint {
        threshold: f64::INFINITY,
        false_positive_rate: 0.0,
        true_positive_rate: 0.0,
    }];
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut auroc = 0.0;
    let mut idx = 0;
    while idx < order.len() {
        let threshold = scores[order[idx]];
        let (prev_tp, prev_fp) = (tp, fp);
        // Consume the whole tie group at this threshold.
        while idx < order.len() && scores[order[idx]] == threshold {
            if true_binary[order[idx]] {
                tp += 1;
            } else {
                fp += 1;
            }
            idx += 1;
        }
        let point = RocPoint {
            threshold,
            false_positive_rate: fp as f64 / negatives as f64,
            true_positive_rate: tp as f64 / positives as f64,
        };
        let prev_fpr = prev_fp as f64 / negatives as f64;
        let prev_tpr = prev_tp as f64 / positives as f64;
        auroc += (point.false_positive_rate - prev_fpr)
            * 0.5
            * (point.true_positive_rate + prev_tpr);
        curve.push(point);
    }
    Ok((curve, auroc))
}
