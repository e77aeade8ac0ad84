//! Deterministic uniform generators for reproducible simulation.
//!
//! Monte-Carlo p-values must come out identical for any degree of
//! parallelism, so every replicate draws from its own substream derived
//! from `(seed, index)` rather than sharing one sequential stream.

/// A source of uniform draws on `[0, 1)`.
pub trait UniformSource {
    /// Next uniform variate in `[0, 1)`.
    fn next_f64(&mut self) -> f64;
}

/// SplitMix64 generator.
///
/// Small, fast, and trivially splittable: `substream(seed, i)` yields a
/// stream that is independent of how many other substreams exist or in
/// which order they are consumed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    /// Generator seeded directly.
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Substream `index` of the stream family identified by `seed`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let tag = mix(index
            .wrapping_mul(0xA24B_AED4_963E_E407)
            .wrapping_add(GOLDEN));
        Self::new(mix(seed ^ tag))
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }
}

impl UniformSource for SplitMix64 {
    fn next_f64(&mut self) -> f64 {
        // 53 random bits scaled into [0, 1).
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }
}

/// Deterministic 64-bit value derived from a seed and a tag, used to give
/// independent stages of an algorithm their own seeds.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix(seed ^ mix(tag.wrapping_add(GOLDEN)))
}
