//! Bivariate RESIT with decoupled estimation.
//!
//! Both regressions are fitted on a leading training block; residuals and
//! scores are computed on the trailing test block. For a dependence measure
//! `I` the score of `X -> Y` is `I(X_test, Y_res)`; for an entropy estimator
//! `H` it is `H(X_test) + H(Y_res)`. The direction with the smaller score wins.
//!
//! Coupled estimation (fitting and scoring on the same data) is not provided.

use std::fmt;
use std::str::FromStr;

use crate::dependence::{DependenceMeasure, HSIC_IC2_ETA, HSIC_IC_ETA};
use crate::entropy::{EntropyMeasure, MaxEntVariant, NeighborSearch};
use crate::error::{check_min_len, Error, Result};
use crate::regression::{RegressionModel, Transform};
use crate::synth::SamplePair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreEstimator {
    Dependence(DependenceMeasure),
    Entropy(EntropyMeasure),
}

impl ScoreEstimator {
    pub fn is_entropy(&self) -> bool {
        matches!(self, ScoreEstimator::Entropy(_))
    }
}

/// The twelve named estimator configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimatorKind {
    Hsic,
    HsicIc,
    HsicIc2,
    DistCov,
    DistCorr,
    Hoeffding,
    ShKnn,
    ShKnn2,
    ShKnn3,
    ShMaxEnt1,
    ShMaxEnt2,
    ShSpacingV,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 12] = [
        EstimatorKind::Hsic,
        EstimatorKind::HsicIc,
        EstimatorKind::HsicIc2,
        EstimatorKind::DistCov,
        EstimatorKind::DistCorr,
        EstimatorKind::Hoeffding,
        EstimatorKind::ShKnn,
        EstimatorKind::ShKnn2,
        EstimatorKind::ShKnn3,
        EstimatorKind::ShMaxEnt1,
        EstimatorKind::ShMaxEnt2,
        EstimatorKind::ShSpacingV,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Hsic => "HSIC",
            EstimatorKind::HsicIc => "HSIC_IC",
            EstimatorKind::HsicIc2 => "HSIC_IC2",
            EstimatorKind::DistCov => "DISTCOV",
            EstimatorKind::DistCorr => "DISTCORR",
            EstimatorKind::Hoeffding => "HOEFFDING",
            EstimatorKind::ShKnn => "SH_KNN",
            EstimatorKind::ShKnn2 => "SH_KNN_2",
            EstimatorKind::ShKnn3 => "SH_KNN_3",
            EstimatorKind::ShMaxEnt1 => "SH_MAXENT1",
            EstimatorKind::ShMaxEnt2 => "SH_MAXENT2",
            EstimatorKind::ShSpacingV => "SH_SPACING_V",
        }
    }

    pub fn estimator(self) -> ScoreEstimator {
        use DependenceMeasure as D;
        use EntropyMeasure as E;
        match self {
            EstimatorKind::Hsic => ScoreEstimator::Dependence(D::Hsic),
            EstimatorKind::HsicIc => ScoreEstimator::Dependence(D::HsicIncompleteCholesky { eta: HSIC_IC_ETA }),
            EstimatorKind::HsicIc2 => ScoreEstimator::Dependence(D::HsicIncompleteCholesky { eta: HSIC_IC2_ETA }),
            EstimatorKind::DistCov => ScoreEstimator::Dependence(D::DistCov),
            EstimatorKind::DistCorr => ScoreEstimator::Dependence(D::DistCorr),
            EstimatorKind::Hoeffding => ScoreEstimator::Dependence(D::Hoeffding),
            EstimatorKind::ShKnn => ScoreEstimator::Entropy(E::Knn {
                k: 3,
                search: NeighborSearch::BruteForce,
            }),
            EstimatorKind::ShKnn2 => ScoreEstimator::Entropy(E::Knn {
                k: 3,
                search: NeighborSearch::KdTree,
            }),
            EstimatorKind::ShKnn3 => ScoreEstimator::Entropy(E::Knn {
                k: 5,
                search: NeighborSearch::BruteForce,
            }),
            EstimatorKind::ShMaxEnt1 => ScoreEstimator::Entropy(E::MaxEnt(MaxEntVariant::Abs)),
            EstimatorKind::ShMaxEnt2 => ScoreEstimator::Entropy(E::MaxEnt(MaxEntVariant::Gauss)),
            EstimatorKind::ShSpacingV => ScoreEstimator::Entropy(E::Vasicek),
        }
    }

    pub fn is_entropy(self) -> bool {
        self.estimator().is_entropy()
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().to_ascii_uppercase().replace('-', "_");
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name() == wanted)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown estimator {s:?}")))
    }
}

/// Score `Ĉ(a, r)` of a regressor sample `a` against residuals `r`.
pub fn score_pair(a: &[f64], r: &[f64], estimator: ScoreEstimator) -> Result<f64> {
    match estimator {
        ScoreEstimator::Dependence(m) => m.score(a, r),
        ScoreEstimator::Entropy(m) => {
            crate::error::check_same_len(a, r)?;
            Ok(m.estimate(a)?.nats + m.estimate(r)?.nats)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    XtoY,
    YtoX,
    Undecided,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::XtoY => Direction::YtoX,
            Direction::YtoX => Direction::XtoY,
            Direction::Undecided => Direction::Undecided,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::XtoY => "X->Y",
            Direction::YtoX => "Y->X",
            Direction::Undecided => "?",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionVerdict {
    pub direction: Direction,
    pub score_xy: f64,
    pub score_yx: f64,
}

impl DirectionVerdict {
    pub fn from_scores(score_xy: f64, score_yx: f64) -> Self {
        let direction = if score_xy < score_yx {
            Direction::XtoY
        } else if score_xy > score_yx {
            Direction::YtoX
        } else {
            Direction::Undecided
        };
        DirectionVerdict {
            direction,
            score_xy,
            score_yx,
        }
    }
}

/// Training/test partition. Only a leading-block split is provided: the first
/// `round(train_fraction * n)` points train, the rest test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitConfig {
    pub train_fraction: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { train_fraction: 0.8 }
    }
}

impl SplitConfig {
    /// Number of training points for a sample of size `n`.
    pub fn train_len(&self, n: usize) -> Result<usize> {
        let f = self.train_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::InvalidParameter(format!("train fraction must be in (0,1), got {f}")));
        }
        let train = (f * n as f64).round() as usize;
        if train == 0 || train >= n {
            return Err(Error::InvalidParameter(format!(
                "split of {n} points at {f} leaves an empty partition"
            )));
        }
        Ok(train)
    }
}

/// Minimum pair length accepted by [`decide_direction`].
pub const MIN_PAIR_LEN: usize = 20;

fn one_direction(
    cause_train: &[f64],
    effect_train: &[f64],
    cause_test: &[f64],
    effect_test: &[f64],
    transform: Transform,
    estimator: ScoreEstimator,
) -> Result<f64> {
    let model = RegressionModel::fit(cause_train, effect_train, transform)?;
    let residuals = model.residuals(cause_test, effect_test)?;
    score_pair(cause_test, &residuals, estimator)
}

/// Runs the procedure on `pair`, regressing `y` on `forward(x)` and `x` on
/// `backward(y)`.
///
/// Both directions are always evaluated; a failure is reported with the
/// direction it happened in (`"both"` when neither succeeds).
pub fn decide_direction(
    pair: &SamplePair,
    forward: Transform,
    backward: Transform,
    estimator: ScoreEstimator,
    split: SplitConfig,
) -> Result<DirectionVerdict> {
    check_min_len(pair.len(), MIN_PAIR_LEN)?;
    let cut = split.train_len(pair.len())?;
    let (x_train, x_test) = pair.x().split_at(cut);
    let (y_train, y_test) = pair.y().split_at(cut);

    let xy = one_direction(x_train, y_train, x_test, y_test, forward, estimator);
    let yx = one_direction(y_train, x_train, y_test, x_test, backward, estimator);
    match (xy, yx) {
        (Ok(a), Ok(b)) => Ok(DirectionVerdict::from_scores(a, b)),
        (Err(e), Ok(_)) => Err(Error::Direction {
            direction: "X->Y",
            source: Box::new(e),
        }),
        (Ok(_), Err(e)) => Err(Error::Direction {
            direction: "Y->X",
            source: Box::new(e),
        }),
        (Err(e), Err(_)) => Err(Error::Direction {
            direction: "both",
            source: Box::new(e),
        }),
    }
}
