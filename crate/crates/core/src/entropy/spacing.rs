//! Vasicek m-spacing entropy estimator.

use super::{clamped_ln, sorted, EntropyEstimate};
use crate::error::{check_finite, check_min_len, Result};

/// `(1/T) Σ log( T/(2m) · (y_(t+m) - y_(t-m)) )` with `m = ⌊√T⌋` and order
/// statistics clamped to the sample range at both ends.
pub fn vasicek_entropy(y: &[f64]) -> Result<EntropyEstimate> {
    check_min_len(y.len(), 4)?;
    check_finite(y)?;
    let s = sorted(y);
    let t = s.len();
    let m = t.isqrt();
    let factor = t as f64 / (2 * m) as f64;
    let mut clamped = 0;
    let mut total = 0.0;
    for i in 0..t {
        let hi = (i + m).min(t - 1);
        let lo = i.saturating_sub(m);
        total += clamped_ln(factor * (s[hi] - s[lo]), &mut clamped);
    }
    Ok(EntropyEstimate {
        nats: total / t as f64,
        clamped,
    })
}
