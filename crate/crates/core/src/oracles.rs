//! Brute-force reference implementations for tests. Built only with the
//! `oracles` feature; nothing in the sweep path calls them.
//!
//! Each oracle follows the textbook definition as directly as practical and
//! shares no code with the estimator it checks.

use std::f64::consts::{E, PI};

use crate::synth::{sample, Distribution, Seed};

/// Side-by-side comparison of an optimized value and its oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub name: String,
    pub main_value: f64,
    pub oracle_value: f64,
    pub abs_diff: f64,
    /// `abs_diff / |oracle_value|`; 0 when both are zero, infinite when only
    /// the oracle is.
    pub rel_diff: f64,
}

impl OracleReport {
    pub fn new(name: impl Into<String>, main_value: f64, oracle_value: f64) -> Self {
        let abs_diff = (main_value - oracle_value).abs();
        let rel_diff = if abs_diff == 0.0 {
            0.0
        } else {
            abs_diff / oracle_value.abs()
        };
        OracleReport {
            name: name.into(),
            main_value,
            oracle_value,
            abs_diff,
            rel_diff,
        }
    }

    pub fn within(&self, rel: f64) -> bool {
        self.rel_diff <= rel
    }
}

fn sorted_median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn rbf_gram(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len();
    let mut positive = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (v[i] - v[j]) * (v[i] - v[j]);
            if d > 0.0 {
                positive.push(d);
            }
        }
    }
    let m = sorted_median(positive);
    (0..n)
        .map(|i| (0..n).map(|j| (-(v[i] - v[j]).powi(2) / m).exp()).collect())
        .collect()
}

/// `trace(KHLH) / n²` expanded as
/// `(1/n²) ΣK∘L - (2/n³) Σ_i Σ_j Σ_k K_ij L_ik + (1/n⁴) ΣK ΣL`.
pub fn oracle_hsic(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let nf = n as f64;
    let k = rbf_gram(a);
    let l = rbf_gram(b);
    let mut t1 = 0.0;
    let mut t2 = 0.0;
    let (mut sk, mut sl) = (0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            t1 += k[i][j] * l[i][j];
            sk += k[i][j];
            sl += l[i][j];
            for m in 0..n {
                t2 += k[i][j] * l[i][m];
            }
        }
    }
    t1 / (nf * nf) - 2.0 * t2 / (nf * nf * nf) + sk * sl / (nf * nf * nf * nf)
}

/// Squared distance covariance from raw pairwise distances, without
/// forming centered matrices: `S1 + S2 - 2 S3` with
/// `S1 = mean(a_ij b_ij)`, `S2 = mean(a_ij) mean(b_ij)`,
/// `S3 = (1/n³) Σ_i Σ_j Σ_k a_ij b_ik`.
fn oracle_dcov_sq(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let nf = n as f64;
    let (mut s1, mut ma, mut mb, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let aij = (a[i] - a[j]).abs();
            let bij = (b[i] - b[j]).abs();
            s1 += aij * bij;
            ma += aij;
            mb += bij;
            for k in 0..n {
                s3 += aij * (b[i] - b[k]).abs();
            }
        }
    }
    let n2 = nf * nf;
    s1 / n2 + (ma / n2) * (mb / n2) - 2.0 * s3 / (n2 * nf)
}

pub fn oracle_dist_cov(a: &[f64], b: &[f64]) -> f64 {
    oracle_dcov_sq(a, b).max(0.0).sqrt()
}

pub fn oracle_dist_corr(a: &[f64], b: &[f64]) -> f64 {
    let den = oracle_dcov_sq(a, a) * oracle_dcov_sq(b, b);
    if den <= 0.0 {
        return 0.0;
    }
    (oracle_dcov_sq(a, b).max(0.0) / den.sqrt()).sqrt()
}

fn normalized_ranks(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    v.iter()
        .map(|&x| {
            let below = v.iter().filter(|&&y| y < x).count() as f64;
            let equal = v.iter().filter(|&&y| y == x).count() as f64;
            (below + (equal + 1.0) / 2.0) / n
        })
        .collect()
}

/// Integrates `(C_n(u,v) - uv)²` exactly cell by cell over the grid cut by
/// the distinct normalized ranks, where `C_n` is piecewise constant.
pub fn oracle_hoeffding_grid(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let u = normalized_ranks(a);
    let v = normalized_ranks(b);
    let cuts = |w: &[f64]| {
        let mut c: Vec<f64> = w.iter().copied().chain([0.0, 1.0]).collect();
        c.sort_by(f64::total_cmp);
        c.dedup();
        c
    };
    let (cu, cv) = (cuts(&u), cuts(&v));
    let mut integral = 0.0;
    for p in cu.windows(2) {
        for q in cv.windows(2) {
            let c = u.iter().zip(&v).filter(|(&x, &y)| x <= p[0] && y <= q[0]).count() as f64 / n;
            let (du, dv) = (p[1] - p[0], q[1] - q[0]);
            let iu = (p[1] * p[1] - p[0] * p[0]) / 2.0;
            let iv = (q[1] * q[1] - q[0] * q[0]) / 2.0;
            let iu2 = (p[1].powi(3) - p[0].powi(3)) / 3.0;
            let iv2 = (q[1].powi(3) - q[0].powi(3)) / 3.0;
            integral += c * c * du * dv - 2.0 * c * iu * iv + iu2 * iv2;
        }
    }
    (90.0 * integral).max(0.0).sqrt()
}

/// Distance from each point to its k-th nearest other point, by sorting all
/// pairwise distances.
pub fn oracle_knn(y: &[f64], k: usize) -> Vec<f64> {
    (0..y.len())
        .map(|i| {
            let mut d: Vec<f64> = (0..y.len()).filter(|&j| j != i).map(|j| (y[i] - y[j]).abs()).collect();
            d.sort_by(f64::total_cmp);
            d[k - 1]
        })
        .collect()
}

/// Closed-form differential entropy (nats) of the family at the given scale,
/// using the sampler's parameterization: 𝒩(0, s²), 𝒰(-s, s), ℒ(0, s).
pub fn oracle_entropy_analytic(dist: Distribution, scale: f64) -> f64 {
    match dist {
        Distribution::Normal => 0.5 * (2.0 * PI * E * scale * scale).ln(),
        Distribution::Uniform => (2.0 * scale).ln(),
        Distribution::Laplace => 1.0 + (2.0 * scale).ln(),
    }
}

fn log_pdf(dist: Distribution, scale: f64, x: f64) -> f64 {
    match dist {
        Distribution::Normal => -0.5 * (x / scale).powi(2) - (scale * (2.0 * PI).sqrt()).ln(),
        Distribution::Uniform => {
            if x.abs() <= scale {
                -(2.0 * scale).ln()
            } else {
                f64::NEG_INFINITY
            }
        }
        Distribution::Laplace => -(x.abs() / scale) - (2.0 * scale).ln(),
    }
}

/// `-mean(log p(Y_t))` over `n` draws: an unbiased Monte-Carlo estimate of
/// the entropy with the exact density.
pub fn oracle_entropy_monte_carlo(dist: Distribution, scale: f64, n: usize, seed: Seed) -> f64 {
    let ys = sample(dist, scale, n, seed).expect("valid sampling parameters");
    -ys.iter().map(|&y| log_pdf(dist, scale, y)).sum::<f64>() / n as f64
}
