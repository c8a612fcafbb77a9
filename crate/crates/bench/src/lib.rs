//! Fixtures shared by the criterion benches.

use resit_core::synth::{generate_pair, sample, Distribution, IFactor, ModelSpec, SamplePair, Seed, Structure};

/// A linear U+U pair at i = 0.5, the typical sweep workload.
pub fn linear_pair(n: usize, seed: u64) -> SamplePair {
    let spec = ModelSpec::new(
        Structure::Linear,
        Distribution::Uniform,
        Distribution::Uniform,
        IFactor::from_hundredths(50),
        n,
    )
    .expect("valid spec");
    generate_pair(&spec, Seed::new(seed, 0)).expect("sampling succeeds")
}

/// Two dependent vectors of length `n`: a Laplace draw and a noisy cube of it.
pub fn dependent_vectors(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let a = sample(Distribution::Laplace, 1.0, n, Seed::new(seed, 0)).expect("sampling succeeds");
    let noise = sample(Distribution::Normal, 1.0, n, Seed::new(seed, 1)).expect("sampling succeeds");
    let b = a.iter().zip(&noise).map(|(x, e)| x * x * x + e).collect();
    (a, b)
}

pub fn normal_vector(n: usize, seed: u64) -> Vec<f64> {
    sample(Distribution::Normal, 1.0, n, Seed::new(seed, 2)).expect("sampling succeeds")
}
