//! Counter-based randomness.
//!
//! Every random quantity attached to a vertex is a pure function of
//! `(seed, stream, vertex)`: the ChaCha8 keystream for `seed` is addressed by
//! word position, so any vertex range can be regenerated independently of
//! how the work was chunked or scheduled.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream used for fitness draws.
pub const STREAM_FITNESS: u64 = 0;
/// Stream used for vertex removal in thinning.
pub const STREAM_THINNING: u64 = 1;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive the seed of replicate `r` from a base seed.
///
/// `mix64(seed, r) = splitmix64(seed + (r + 1) * 0x9e3779b97f4a7c15)`, i.e. the
/// `r + 1`-th output of a SplitMix64 generator started at `seed`.
#[inline]
pub fn mix64(seed: u64, r: u64) -> u64 {
    splitmix64(seed.wrapping_add(r.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Map 64 random bits onto `[0, 1)` with 53-bit resolution.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A seekable source of two 64-bit words per vertex.
#[derive(Clone)]
pub struct VertexStream {
    rng: ChaCha8Rng,
}

impl VertexStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        VertexStream { rng }
    }

    /// Position the stream at the first word belonging to `vertex`.
    pub fn seek(&mut self, vertex: u64) {
        // two u64 = four u32 words per vertex
        self.rng.set_word_pos(u128::from(vertex) * 4);
    }

    /// Next pair of uniforms in `[0, 1)`; consumes exactly one vertex slot.
    #[inline]
    pub fn next_pair(&mut self) -> (f64, f64) {
        let a = self.rng.next_u64();
        let b = self.rng.next_u64();
        (unit_f64(a), unit_f64(b))
    }

    /// The uniform pair belonging to `vertex`, independent of stream position.
    pub fn pair_at(&mut self, vertex: u64) -> (f64, f64) {
        self.seek(vertex);
        self.next_pair()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_position_addressed() {
        let mut seq = VertexStream::new(42, STREAM_FITNESS);
        seq.seek(0);
        let all: Vec<_> = (0..64).map(|_| seq.next_pair()).collect();
        let mut random_access = VertexStream::new(42, STREAM_FITNESS);
        for v in [17u64, 3, 63, 0, 40] {
            assert_eq!(random_access.pair_at(v), all[v as usize]);
        }
    }

    #[test]
    fn streams_differ() {
        let a = VertexStream::new(1, STREAM_FITNESS).pair_at(5);
        let b = VertexStream::new(1, STREAM_THINNING).pair_at(5);
        assert_ne!(a, b);
    }

    #[test]
    fn mix64_separates_replicates() {
        let seeds: std::collections::HashSet<u64> = (0..10_000).map(|r| mix64(7, r)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_eq!(mix64(7, 3), mix64(7, 3));
    }

    #[test]
    fn unit_range() {
        assert_eq!(unit_f64(0), 0.0);
        assert!(unit_f64(u64::MAX) < 1.0);
    }
}
