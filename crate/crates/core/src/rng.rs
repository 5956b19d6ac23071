//! Seeded randomness for reproducible experiment runs.
//!
//! The generator is SplitMix64: 64 bits of state, advanced by the golden
//! gamma `0x9E3779B97F4A7C15` and finalized with the murmur-style mixer.
//! It is small enough to reimplement exactly in any language, which is
//! the point — runs must be bit-reproducible across implementations.
//!
//! Stream splitting: substream `i` of seed `s` starts from state
//! `mix(s XOR mix(i + 1))`. Substreams depend only on the seed and the
//! index, so adding more samplers or reordering work never changes the
//! draws of an existing ensemble member.
//!
//! Gaussian draws use Box–Muller on pairs of uniforms. Each `u64` output
//! `x` maps to the uniform `1 − (x >> 11)·2⁻⁵³ ∈ (0, 1]`, so the
//! logarithm is always defined; both normals of a pair are consumed in
//! order.

use crate::scalar::Real;
use crate::state::StateVector;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Finalization mixer (the murmur3-derived variant used by SplitMix64).
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent substream for ensemble member `index`.
    pub fn substream(seed: u64, index: u64) -> Self {
        Self::new(mix(seed ^ mix(index.wrapping_add(1))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`; safe to pass to `ln`.
    fn next_open_f64(&mut self) -> f64 {
        1.0 - self.next_f64()
    }
}

/// Standard normal draws via Box–Muller, consuming both outputs of each
/// pair before drawing new uniforms.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(rng: SplitMix64) -> Self {
        Self { rng, spare: None }
    }

    /// Substream shorthand: the Gaussian source for ensemble member
    /// `index` under `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        Self::new(SplitMix64::substream(seed, index))
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(n) = self.spare.take() {
            return n;
        }
        let u1 = self.rng.next_open_f64();
        let u2 = self.rng.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// A `dim`-dimensional standard-normal state vector.
    pub fn state_vector<T: Real>(&mut self, dim: usize) -> StateVector<T> {
        StateVector::new(
            (0..dim)
                .map(|_| T::from_f64_const(self.next_normal()))
                .collect(),
        )
        .expect("Box-Muller outputs are finite")
    }
}
