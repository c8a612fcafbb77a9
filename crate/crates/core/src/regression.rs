//! Ordinary least squares on a transformed regressor.
//!
//! Nonlinear mechanisms are handled by a coordinate change on the regressor,
//! so the fitted model is always `yhat = slope * t(x) + intercept`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_finite, check_min_len, check_same_len, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Identity,
    /// `t(x) = x^3`
    Cube,
    /// `t(x) = sgn(x) |x|^(1/3)`
    SignedCubeRoot,
}

impl Transform {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Cube => x * x * x,
            Transform::SignedCubeRoot => x.cbrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Transform::Identity => "identity",
            Transform::Cube => "cube",
            Transform::SignedCubeRoot => "cbrt",
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" | "linear" | "none" => Ok(Transform::Identity),
            "cube" => Ok(Transform::Cube),
            "cbrt" | "cuberoot" | "signed-cube-root" => Ok(Transform::SignedCubeRoot),
            other => Err(Error::InvalidParameter(format!("unknown transform {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionModel {
    pub transform: Transform,
    pub slope: f64,
    pub intercept: f64,
}

impl RegressionModel {
    /// Least-squares fit of `y` on `transform(x)` with an intercept.
    pub fn fit(x: &[f64], y: &[f64], transform: Transform) -> Result<Self> {
        check_same_len(x, y)?;
        check_min_len(x.len(), 3)?;
        check_finite(x)?;
        check_finite(y)?;

        let t: Vec<f64> = x.iter().map(|&v| transform.apply(v)).collect();
        let n = t.len() as f64;
        let t_mean = t.iter().sum::<f64>() / n;
        let y_mean = y.iter().sum::<f64>() / n;
        let (mut sxx, mut sxy) = (0.0, 0.0);
        for (&ti, &yi) in t.iter().zip(y) {
            let dt = ti - t_mean;
            sxx += dt * dt;
            sxy += dt * (yi - y_mean);
        }
        // Variance below rounding noise of the regressor counts as zero.
        let t_max = t.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !(sxx.is_finite() && sxx > n * (f64::EPSILON * t_max).powi(2)) {
            return Err(Error::DegenerateRegressor);
        }
        let slope = sxy / sxx;
        Ok(RegressionModel {
            transform,
            slope,
            intercept: y_mean - slope * t_mean,
        })
    }

    #[inline]
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * self.transform.apply(x) + self.intercept
    }

    /// Prediction minus observation, elementwise.
    pub fn residuals(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_same_len(x, y)?;
        check_min_len(x.len(), 1)?;
        Ok(x.iter().zip(y).map(|(&xi, &yi)| self.predict(xi) - yi).collect())
    }
}

/// Free-function form of [`RegressionModel::fit`].
pub fn fit(x: &[f64], y: &[f64], transform: Transform) -> Result<RegressionModel> {
    RegressionModel::fit(x, y, transform)
}
