//! Exact solver for the rectangular assignment problem (Hungarian
//! algorithm with potentials, O(n^2 m)).

/// Minimum-cost assignment of every row to a distinct column.
/// Requires `rows <= cols`; returns the assigned column per row.
pub(crate) fn hungarian_min(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    assert!(n <= m, "assignment needs rows <= cols");

    // 1-based arrays; p[j] is the row matched to column j (0 = free).
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0usize; n];
    for j in 1..=m {
        if p[j] != 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Maximum-weight one-to-one matching value over a rectangular
/// nonnegative weight matrix (rows and columns may differ; unmatched
/// lines contribute zero).
pub(crate) fn max_matching_weight(weights: &[Vec<f64>]) -> f64 {
    if weights.is_empty() || weights[0].is_empty() {
        return 0.0;
    }
    let transposed;
    let w: &[Vec<f64>] = if weights.len() <= weights[0].len() {
        weights
    } else {
        transposed = (0..weights[0].len())
            .map(|j| weights.iter().map(|row| row[j]).collect::<Vec<f64>>())
            .collect::<Vec<_>>();
        &transposed
    };
    let top = w
        .iter()
        .flat_map(|row| row.iter().copied())
        .fold(0.0f64, f64::max);
    let cost: Vec<Vec<f64>> = w
        .iter()
        .map(|row| row.iter().map(|&x| top - x).collect())
        .collect();
    let assignment = hungarian_min(&cost);
    assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| w[i][j])
        .sum()
}
