//! Differential entropy estimators for one-dimensional samples, in nats.

mod kdtree;
mod knn;
mod maxent;
mod spacing;

pub use kdtree::KdTree;
pub use knn::{digamma_int, kth_neighbor_distances, knn_entropy, knn_entropy_equivalence, NeighborSearch};
pub use maxent::{maxent_entropy, maxent_entropy_with, MaxEntVariant, GAUSSIAN_ENTROPY};
pub use spacing::vasicek_entropy;

use crate::error::Result;

/// Distances and spacings below this are clamped before taking logs.
pub const MIN_LOG_ARGUMENT: f64 = 1e-300;

/// An entropy value plus the number of log arguments that had to be clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub nats: f64,
    pub clamped: usize,
}

pub(crate) fn clamped_ln(v: f64, clamped: &mut usize) -> f64 {
    if v < MIN_LOG_ARGUMENT {
        *clamped += 1;
        MIN_LOG_ARGUMENT.ln()
    } else {
        v.ln()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyMeasure {
    Knn { k: usize, search: NeighborSearch },
    MaxEnt(MaxEntVariant),
    Vasicek,
}

impl EntropyMeasure {
    pub fn estimate(self, y: &[f64]) -> Result<EntropyEstimate> {
        match self {
            EntropyMeasure::Knn { k, search } => knn_entropy(y, k, search),
            EntropyMeasure::MaxEnt(variant) => maxent_entropy(y, variant),
            EntropyMeasure::Vasicek => vasicek_entropy(y),
        }
    }
}

/// Sorted copy; estimators sum over sorted data so that the result does not
/// depend on input order, bit for bit.
pub(crate) fn sorted(y: &[f64]) -> Vec<f64> {
    let mut s = y.to_vec();
    s.sort_by(f64::total_cmp);
    s
}
