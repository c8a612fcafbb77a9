//! Dependence scores between a regressor and its residuals.
//!
//! All scores are non-negative and symmetric in their arguments; smaller
//! means "closer to independent".

mod distance;
mod hoeffding;
mod hsic;

pub use distance::{dist_corr, dist_cov, dist_var};
pub use hoeffding::{average_ranks, hoeffding_phi, HOEFFDING_NORMALIZER_2D};
pub use hsic::{hsic, hsic_incomplete_cholesky, incomplete_cholesky, median_bandwidth, GramMatrix};

use crate::error::Result;

/// Precision of the incomplete Cholesky factorization for `HSIC_IC`.
pub const HSIC_IC_ETA: f64 = 1e-6;
/// Precision of the incomplete Cholesky factorization for `HSIC_IC2`.
pub const HSIC_IC2_ETA: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DependenceMeasure {
    Hsic,
    /// HSIC from pivoted low-rank factors; `eta` bounds the residual trace.
    HsicIncompleteCholesky { eta: f64 },
    DistCov,
    DistCorr,
    Hoeffding,
}

impl DependenceMeasure {
    pub fn score(self, a: &[f64], b: &[f64]) -> Result<f64> {
        match self {
            DependenceMeasure::Hsic => hsic(a, b),
            DependenceMeasure::HsicIncompleteCholesky { eta } => hsic_incomplete_cholesky(a, b, eta),
            DependenceMeasure::DistCov => dist_cov(a, b),
            DependenceMeasure::DistCorr => dist_corr(a, b),
            DependenceMeasure::Hoeffding => hoeffding_phi(a, b),
        }
    }
}
