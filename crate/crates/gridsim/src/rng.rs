//! A small deterministic pseudo-random generator for building test
//! instances.
//!
//! This is the SplitMix64 mixer: one 64-bit state cell advanced by a Weyl
//! constant and scrambled by two xor-multiply rounds. It is not
//! cryptographic and not meant to be; it is chosen because the whole
//! algorithm fits in ten lines, has published reference outputs to pin the
//! implementation against, and makes every instance reproducible from a
//! single seed across platforms.

/// Deterministic 64-bit generator (SplitMix64).
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    /// Next raw 64-bit value.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform float in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[lo, hi)`. Uses a plain modulus: the bias is
    /// far below anything these test instances could detect, and the
    /// simplicity keeps cross-checks trivial.
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo < hi, "empty range [{lo}, {hi})");
        let span = (hi - lo) as u64;
        lo + (self.next_u64() % span) as i64
    }
}
