//! Kozachenko-Leonenko nearest-neighbor entropy estimator (d = 1).

use super::kdtree::{Best, KdTree};
use super::{clamped_ln, sorted, EntropyEstimate};
use crate::error::{check_finite, Error, Result};

/// How k-th neighbor distances are found. Both give identical distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighborSearch {
    /// Exhaustive scan over all other points.
    BruteForce,
    KdTree,
}

/// Volume of the unit ball in one dimension.
const UNIT_BALL_VOLUME_1D: f64 = 2.0;

/// Digamma at a positive integer: `-γ + Σ_{j<k} 1/j`.
pub fn digamma_int(k: usize) -> f64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    -EULER_GAMMA + (1..k).map(|j| 1.0 / j as f64).sum::<f64>()
}

const CHUNK: usize = 32;

/// Exhaustive scan in blocks of `CHUNK` points, starting with the query's own
/// block. A block is skipped when its value range lies entirely beyond the
/// current k-th best distance.
fn brute_force_kth(y: &[f64], k: usize) -> Vec<f64> {
    let ranges: Vec<(f64, f64)> = y
        .chunks(CHUNK)
        .map(|c| c.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))))
        .collect();
    let mut out = Vec::with_capacity(y.len());
    for (i, &q) in y.iter().enumerate() {
        let mut best = Best::new(k);
        let home = i / CHUNK;
        for c in std::iter::once(home).chain((0..ranges.len()).filter(|&c| c != home)) {
            let (lo, hi) = ranges[c];
            let gap = (lo - q).max(q - hi).max(0.0);
            if gap >= best.worst() {
                continue;
            }
            let base = c * CHUNK;
            for (j, &v) in y[base..(base + CHUNK).min(y.len())].iter().enumerate() {
                if base + j != i {
                    best.offer((q - v).abs());
                }
            }
        }
        out.push(best.worst());
    }
    out
}

fn kd_tree_kth(y: &[f64], k: usize) -> Vec<f64> {
    let tree = KdTree::build(y);
    y.iter()
        .enumerate()
        .map(|(i, &q)| tree.nearest(q, k, Some(i))[k - 1])
        .collect()
}

fn check_knn_input(y: &[f64], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if y.len() <= k + 1 {
        return Err(Error::TooShort { len: y.len(), min: k + 2 });
    }
    check_finite(y)
}

/// Distance from each point to its k-th nearest other point, in input order.
pub fn kth_neighbor_distances(y: &[f64], k: usize, search: NeighborSearch) -> Result<Vec<f64>> {
    check_knn_input(y, k)?;
    Ok(match search {
        NeighborSearch::BruteForce => brute_force_kth(y, k),
        NeighborSearch::KdTree => kd_tree_kth(y, k),
    })
}

/// `log(T-1) - ψ(k) + log V_1 + (1/T) Σ log ρ_k(t)`.
pub fn knn_entropy(y: &[f64], k: usize, search: NeighborSearch) -> Result<EntropyEstimate> {
    check_knn_input(y, k)?;
    let s = sorted(y);
    let distinct = 1 + s.windows(2).filter(|w| w[0] != w[1]).count();
    if distinct < k + 1 {
        return Err(Error::DegenerateInput("fewer than k+1 distinct values"));
    }
    let rho = kth_neighbor_distances(&s, k, search)?;
    let t = s.len() as f64;
    let mut clamped = 0;
    let log_sum: f64 = rho.iter().map(|&r| clamped_ln(r, &mut clamped)).sum();
    let nats = (t - 1.0).ln() - digamma_int(k) + UNIT_BALL_VOLUME_1D.ln() + log_sum / t;
    Ok(EntropyEstimate { nats, clamped })
}

/// Whether the brute-force and kd-tree paths agree within 1e-10.
pub fn knn_entropy_equivalence(y: &[f64], k: usize) -> Result<bool> {
    let brute = knn_entropy(y, k, NeighborSearch::BruteForce)?;
    let tree = knn_entropy(y, k, NeighborSearch::KdTree)?;
    Ok((brute.nats - tree.nats).abs() <= 1e-10 && brute.clamped == tree.clamped)
}
