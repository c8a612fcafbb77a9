//! Hoeffding's Phi: normalized L2 distance between the empirical copula and
//! the independence copula.

use crate::error::{check_finite, check_min_len, check_same_len, Result};

/// `h_2(2)`: the reciprocal of the integral for the comonotone copula, so that
/// perfect positive dependence scores 1 in the continuum limit.
pub const HOEFFDING_NORMALIZER_2D: f64 = 90.0;

/// 1-based ranks; tied values share the average of their positions.
pub fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut ranks = vec![0.0; v.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && v[order[end]] == v[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end share their mean.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

/// Closed form of `h_2 ∫ (C_n - Π)^2` for the empirical copula `C_n` built on
/// normalized ranks `u = rank / n`:
///
/// `(1/n²) Σ_j Σ_k (1 - max(u_j,u_k))(1 - max(v_j,v_k))
///   - (2/n) Σ_j (1 - u_j²)(1 - v_j²) / 4 + 1/9`.
pub fn hoeffding_phi(a: &[f64], b: &[f64]) -> Result<f64> {
    check_same_len(a, b)?;
    check_min_len(a.len(), 2)?;
    check_finite(a)?;
    check_finite(b)?;
    let n = a.len();
    let nf = n as f64;
    let u: Vec<f64> = average_ranks(a).into_iter().map(|r| r / nf).collect();
    let v: Vec<f64> = average_ranks(b).into_iter().map(|r| r / nf).collect();

    let mut joint = 0.0;
    for j in 0..n {
        // Diagonal term plus twice the strict upper triangle.
        let mut row = (1.0 - u[j]) * (1.0 - v[j]);
        for k in (j + 1)..n {
            row += 2.0 * ((1.0 - u[j].max(u[k])) * (1.0 - v[j].max(v[k])));
        }
        joint += row;
    }
    joint /= nf * nf;
    let cross = u
        .iter()
        .zip(&v)
        .map(|(&x, &y)| (1.0 - x * x) * (1.0 - y * y))
        .sum::<f64>()
        / (4.0 * nf);
    let integral = joint - 2.0 * cross + 1.0 / 9.0;
    Ok((HOEFFDING_NORMALIZER_2D * integral).max(0.0).sqrt())
}
