//! Deterministic seeding and random number generation.
//!
//! Every randomized construction in this crate draws from [`SplitMix64`],
//! seeded either directly or through [`trial_seed`]. The mixing function is
//! fixed here once so that reports are reproducible across runs, platforms,
//! and worker counts.
//!
//! [`mix64`] is the SplitMix64 finalizer:
//!
//! ```text
//! z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9;
//! z ^= z >> 27;  z *= 0x94D049BB133111EB;
//! z ^= z >> 31;
//! ```
//!
//! Per-trial seeds are derived as
//! `trial_seed = mix64(master_seed XOR (trial_index + 1) * 0x9E3779B97F4A7C15)`
//! (wrapping arithmetic throughout). Golden tests pin exact outputs.

/// The 64-bit golden-ratio increment used for seed derivation.
pub const GOLDEN_GAMMA: u64 = 0x9E3779B97F4A7C15;

/// The repo's fixed 64-bit finalizer (SplitMix64 / Murmur3-style).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58476D1CE4E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D049BB133111EB);
    z ^= z >> 31;
    z
}

/// Derive the seed for one trial from a master seed.
#[inline]
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix64(master_seed ^ trial_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA))
}

/// SplitMix64 generator. Small state, full 64-bit output, and a fixed
/// documented algorithm; plenty for the Bernoulli draws and uniform index
/// picks the constructions need.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1), 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [0, bound). Rejection sampling, so exactly uniform.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below(0)");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let r = self.next_u64();
            if r >= threshold {
                return r % bound;
            }
        }
    }

    /// Bernoulli(p). p outside the unit interval saturates.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}
