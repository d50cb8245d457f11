//! Seeded sampling of algebra, group and phase-space points.
//!
//! Group elements are exp(X) with X uniform in [−1, 1]⁶; dual vectors are
//! uniform in [−1, 1]⁶.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::PhasePoint;
use crate::group::{AlgebraVector, DualVector, GroupDescriptor, GroupElement, DIM, DIM_HALF};

pub const DEFAULT_SEED: u64 = 20_240_601;

pub struct Sampler {
    rng: ChaCha8Rng,
    pub seed: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), seed }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn coords(&mut self) -> [f64; DIM] {
        std::array::from_fn(|_| self.uniform(-1.0, 1.0))
    }

    pub fn algebra(&mut self, d: &GroupDescriptor) -> AlgebraVector {
        let c = self.coords();
        d.vector(c)
    }

    pub fn dual(&mut self) -> DualVector {
        DualVector::new(self.coords())
    }

    /// Dual vector with the given Minus block.
    pub fn dual_with_minus(&mut self, minus: [f64; DIM_HALF]) -> DualVector {
        let mut eta = self.dual();
        eta.coords[DIM_HALF..].copy_from_slice(&minus);
        eta
    }

    pub fn group(&mut self, d: &GroupDescriptor) -> GroupElement {
        let x = self.algebra(d);
        d.exp(&x)
    }

    pub fn point(&mut self, d: &GroupDescriptor) -> PhasePoint {
        let g = self.group(d);
        let eta = self.dual();
        PhasePoint::new(d, g, eta).expect("every sampled element factorizes")
    }

    pub fn point_with_minus(&mut self, d: &GroupDescriptor, minus: [f64; DIM_HALF]) -> PhasePoint {
        let g = self.group(d);
        let eta = self.dual_with_minus(minus);
        PhasePoint::new(d, g, eta).expect("every sampled element factorizes")
    }
}
