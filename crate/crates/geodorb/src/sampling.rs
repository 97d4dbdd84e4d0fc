//! Deterministic sampling used by every stochastic routine in the crate.
//!
//! All randomness flows from a single `u64` seed through a ChaCha8 stream,
//! a counter-based generator whose output is identical across platforms.
//! Reports name the generator so runs can be reproduced exactly.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name of the generator recorded in reports.
pub const GENERATOR_NAME: &str = "chacha8";

/// Seeded sample stream.
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    /// Create a stream from a seed.
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Standard normal draw (Box-Muller on the uniform stream, so the
    /// sequence depends only on the seed).
    pub fn standard_normal(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.gen::<f64>(); // (0, 1]
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Vector of independent standard normals.
    pub fn gaussian_vector(&mut self, dim: usize) -> DVector<f64> {
        DVector::from_fn(dim, |_, _| self.standard_normal())
    }

    /// Uniform direction on the unit sphere (normalized Gaussian; redraws
    /// the astronomically unlikely near-zero vector).
    pub fn unit_direction(&mut self, dim: usize) -> DVector<f64> {
        loop {
            let v = self.gaussian_vector(dim);
            let n = v.norm();
            if n > 1e-6 {
                return v / n;
            }
        }
    }
}
