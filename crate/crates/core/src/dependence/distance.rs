//! Sample distance covariance and distance correlation.

use crate::error::{check_finite, check_min_len, check_same_len, Result};

/// Double-centered matrix of pairwise absolute differences, row-major.
fn centered_distances(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = (v[i] - v[j]).abs();
            d[i * n + j] = dij;
            d[j * n + i] = dij;
        }
    }
    let row_means: Vec<f64> = d.chunks_exact(n).map(|r| r.iter().sum::<f64>() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] += grand - row_means[i] - row_means[j];
        }
    }
    d
}

fn check(a: &[f64], b: &[f64]) -> Result<()> {
    check_same_len(a, b)?;
    check_min_len(a.len(), 2)?;
    check_finite(a)?;
    check_finite(b)
}

/// Distance covariance on the norm scale: `sqrt(mean(A ∘ B))` for
/// double-centered distance matrices `A`, `B`. Constant input gives 0.
pub fn dist_cov(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    let da = centered_distances(a);
    let db = centered_distances(b);
    let n2 = (a.len() * a.len()) as f64;
    // Summing the products in a fixed pairing keeps dist_cov(a,b) == dist_cov(b,a).
    let v2 = da.iter().zip(&db).map(|(x, y)| x * y).sum::<f64>() / n2;
    Ok(v2.max(0.0).sqrt())
}

pub fn dist_var(a: &[f64]) -> Result<f64> {
    dist_cov(a, a)
}

/// Distance covariance standardized by the two distance variances. Returns 0
/// when the variance product is not positive.
pub fn dist_corr(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    let denom = dist_var(a)? * dist_var(b)?;
    if denom <= 0.0 {
        return Ok(0.0);
    }
    Ok((dist_cov(a, b)? / denom.sqrt()).min(1.0))
}
