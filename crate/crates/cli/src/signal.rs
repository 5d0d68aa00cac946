//! Seeded test signals for the denoising experiment: a sparse base signal
//! with three constant plateaus plus Gaussian noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Piecewise-constant base signal: zero outside three plateaus placed at
/// fixed fractions of the length.
pub fn base_signal(n: usize) -> Vec<f64> {
    let plateaus = [(0.10, 0.28, 0.7), (0.40, 0.58, -0.5), (0.72, 0.90, 0.9)];
    (0..n)
        .map(|i| {
            let pos = i as f64 / n.max(1) as f64;
            plateaus
                .iter()
                .find(|&&(lo, hi, _)| pos >= lo && pos < hi)
                .map_or(0.0, |&(_, _, level)| level)
        })
        .collect()
}

/// Base signal plus `N(0, sigma^2)` noise from the seeded generator.
pub fn noisy_signal(n: usize, sigma: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let base = base_signal(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma.max(0.0)).expect("finite sigma");
    let noisy = base.iter().map(|&v| v + normal.sample(&mut rng)).collect();
    (base, noisy)
}
