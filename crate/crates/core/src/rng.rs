//! Counter-based 64-bit generator.
//!
//! Word `i` of the stream keyed by `(master_seed, stream_id)` is
//!
//! ```text
//! mix(mix(i + k0) ^ k1)
//! ```
//!
//! where `mix` is the SplitMix64 finalizer (a bijection on 64-bit words) and
//! `k0 = mix(master_seed ^ A)`, `k1 = mix(stream_id + mix(master_seed) + B)`.
//! Any word can be produced without producing the ones before it, and a
//! stream is fully determined by its two keys and a counter. The algorithm is
//! frozen: seed-pinned regression values depend on it.

use crate::math;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const SALT: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 output finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    k0: u64,
    k1: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let k0 = mix64(master_seed ^ SALT);
        let k1 = mix64(stream_id.wrapping_add(mix64(master_seed)).wrapping_add(GOLDEN));
        Self { master_seed, stream_id, k0, k1, counter: 0 }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of words drawn so far.
    pub fn position(&self) -> u64 {
        self.counter
    }

    /// Word `index` of this stream, independent of the current position.
    #[inline]
    pub fn word_at(&self, index: u64) -> u64 {
        mix64(mix64(index.wrapping_add(self.k0)) ^ self.k1)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let w = self.word_at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        w
    }

    /// A child stream under the same master seed, keyed by this stream and `index`.
    pub fn substream(&self, index: u64) -> RngStream {
        let id = mix64(self.stream_id ^ mix64(index.wrapping_add(GOLDEN)));
        RngStream::new(self.master_seed, id)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    #[inline]
    pub fn next_f64_open_low(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound`, without modulo bias. Panics on zero.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let w = self.next_u64();
            if w < zone {
                return w % bound;
            }
        }
    }

    /// True with probability `p`.
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Standard normal deviate by Box-Muller (one of the pair is discarded).
    pub fn normal(&mut self) -> f64 {
        let u = self.next_f64_open_low();
        let v = self.next_f64();
        math::sqrt(-2.0 * math::ln(u)) * math::cos(2.0 * math::PI * v)
    }
}
