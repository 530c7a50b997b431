//! Deterministic pseudo-random generation.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood; the same mixer used to
//! seed most modern PRNGs). It is tiny, has a well-defined reference output,
//! and carries no dependency whose sampling algorithm could drift between
//! versions — reruns of a build are bit-identical by construction.
//!
//! Per-pixel work derives an independent stream from `(seed, pixel index)`
//! through a double application of the finaliser, so sampling may be
//! parallelised over pixels without changing the output.

/// 64-bit seed for all stochastic operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed(pub u64);

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalising mixer (Stafford variant 13).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 sequential generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for one pixel of a seeded operation.
    pub fn pixel_stream(seed: Seed, index: u64) -> Self {
        let stream = mix64(seed.0 ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)));
        SplitMix64::new(stream)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform double in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
