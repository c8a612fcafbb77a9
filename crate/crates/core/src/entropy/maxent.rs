//! Maximum-entropy approximation: Gaussian entropy minus a non-negative
//! correction from two nonpolynomial moments of the standardized sample.

use super::{sorted, EntropyEstimate};
use crate::error::{check_finite, check_min_len, Error, Result};

/// Entropy of the standard normal, `ln(2πe)/2`.
pub const GAUSSIAN_ENTROPY: f64 = 1.418_938_533_204_672_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxEntVariant {
    /// Even contrast `G(z) = |z|`.
    Abs,
    /// Even contrast `G(z) = exp(-z²/2)`.
    Gauss,
}

impl MaxEntVariant {
    fn even_contrast(self, z: f64) -> f64 {
        match self {
            MaxEntVariant::Abs => z.abs(),
            MaxEntVariant::Gauss => (-0.5 * z * z).exp(),
        }
    }

    /// Expectation of the even contrast under the standard normal.
    fn gaussian_mean(self) -> f64 {
        match self {
            MaxEntVariant::Abs => (2.0 / std::f64::consts::PI).sqrt(),
            MaxEntVariant::Gauss => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    fn even_weight(self) -> f64 {
        match self {
            MaxEntVariant::Abs => 1.0 / (2.0 - 6.0 / std::f64::consts::PI),
            MaxEntVariant::Gauss => 24.0 / (16.0 * 3f64.sqrt() - 27.0),
        }
    }
}

fn odd_weight() -> f64 {
    36.0 / (8.0 * 3f64.sqrt() - 9.0)
}

/// Estimate with the scale taken as `sqrt(Σ y² / (T-1))`, without centering.
pub fn maxent_entropy(y: &[f64], variant: MaxEntVariant) -> Result<EntropyEstimate> {
    maxent_entropy_with(y, variant, false)
}

/// As [`maxent_entropy`]; with `center` the sample mean is removed first,
/// which makes the estimate translation invariant.
pub fn maxent_entropy_with(y: &[f64], variant: MaxEntVariant, center: bool) -> Result<EntropyEstimate> {
    check_min_len(y.len(), 3)?;
    check_finite(y)?;
    let mut s = sorted(y);
    let t = s.len() as f64;
    if center {
        let m = s.iter().sum::<f64>() / t;
        s.iter_mut().for_each(|v| *v -= m);
    }
    let sigma = (s.iter().map(|v| v * v).sum::<f64>() / (t - 1.0)).sqrt();
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::DegenerateInput("zero scale"));
    }
    let (mut odd, mut even) = (0.0, 0.0);
    for &v in &s {
        let z = v / sigma;
        odd += z * (-0.5 * z * z).exp();
        even += variant.even_contrast(z);
    }
    odd /= t;
    even /= t;
    let correction = odd_weight() * odd * odd + variant.even_weight() * (even - variant.gaussian_mean()).powi(2);
    Ok(EntropyEstimate {
        nats: GAUSSIAN_ENTROPY - correction + sigma.ln(),
        clamped: 0,
    })
}
