//! Seeded Gaussian sampling for the inequality checks.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Default scale of the Gaussian samples.
pub const DEFAULT_RADIUS: f64 = 10.0;

/// Deterministic sampler producing points with standard Gaussian entries
/// scaled by `radius`. The first pair emitted contains the all-zeros point,
/// so the origin's neighborhood is always exercised alongside the far field.
pub struct PairSampler {
    rng: ChaCha8Rng,
    dim: usize,
    radius: f64,
    emitted: usize,
}

impl PairSampler {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self::with_radius(dim, seed, DEFAULT_RADIUS)
    }

    pub fn with_radius(dim: usize, seed: u64, radius: f64) -> Self {
        PairSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
            radius,
            emitted: 0,
        }
    }

    pub fn point(&mut self) -> DVector<f64> {
        let normal = StandardNormal;
        DVector::from_iterator(
            self.dim,
            (0..self.dim).map(|_| {
                let g: f64 = normal.sample(&mut self.rng);
                self.radius * g
            }),
        )
    }

    /// The next sample pair.
    pub fn pair(&mut self) -> (DVector<f64>, DVector<f64>) {
        let pair = if self.emitted == 0 {
            (DVector::zeros(self.dim), self.point())
        } else {
            (self.point(), self.point())
        };
        self.emitted += 1;
        pair
    }
}
