//! Small numeric helpers shared across modules.

/// Log of the sum of exponentials, stable against overflow.
///
/// Returns `-inf` for an all-`-inf` (or empty) input.
pub(crate) fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}
