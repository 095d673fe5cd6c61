use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Seeded Gaussian measurement noise; one draw per sample.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    rng: ChaCha8Rng,
    sigma: f64,
}

impl NoiseSource {
    pub fn new(sigma: f64, seed: u64) -> Self {
        NoiseSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sigma,
        }
    }

    /// Next noise sample. The stream advances even for `sigma = 0`.
    pub fn sample(&mut self) -> f64 {
        let n: f64 = StandardNormal.sample(&mut self.rng);
        self.sigma * n
    }

    pub fn corrupt(&mut self, y: f64) -> f64 {
        add_noise(y, self.sigma, &mut self.rng)
    }
}

/// `y + N(0, σ²)` drawn from `rng`; the identity for `σ = 0`.
pub fn add_noise(y: f64, sigma: f64, rng: &mut ChaCha8Rng) -> f64 {
    let n: f64 = StandardNormal.sample(rng);
    if sigma == 0.0 { y } else { y + sigma * n }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_sigma_is_identity() {
        let mut src = NoiseSource::new(0.0, 1);
        for y in [0.0, -1.5, 1e300] {
            assert_eq!(src.corrupt(y), y);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = NoiseSource::new(0.02, 42);
        let mut b = NoiseSource::new(0.02, 42);
        for _ in 0..1000 {
            assert_eq!(a.sample().to_bits(), b.sample().to_bits());
        }
    }

    #[test]
    fn sample_statistics() {
        let sigma = 0.02;
        let n = 100_000;
        let mut src = NoiseSource::new(sigma, 7);
        let xs: Vec<f64> = (0..n).map(|_| src.sample()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 * sigma / (n as f64).sqrt());
        assert!((var.sqrt() / sigma - 1.0).abs() < 0.02);
    }
}
