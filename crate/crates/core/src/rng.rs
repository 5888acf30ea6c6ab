//! Reproducible random streams.
//!
//! Every randomized routine takes an [`RngStream`], a `(seed, stream)` pair
//! that deterministically selects a ChaCha8 keystream. ChaCha8 output is
//! specified bit-for-bit, so identical pairs give identical sequences on every
//! platform and regardless of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies one independent pseudo-random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Stream for replicate `index` of an experiment seeded by `master`.
    pub fn replicate(master: u64, index: u64) -> Self {
        Self::new(master, index)
    }

    /// Derive a child stream, independent of the parent and of siblings with
    /// a different `tag`.
    pub fn substream(&self, tag: u64) -> Self {
        Self::new(splitmix64(self.seed ^ splitmix64(self.stream)), tag)
    }

    /// Instantiate the generator.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

impl Default for RngStream {
    fn default() -> Self {
        Self::new(0, 0)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn same_pair_same_sequence() {
        let a: Vec<u64> = (0..8).map({
            let mut r = RngStream::new(7, 3).rng();
            move |_| r.gen()
        }).collect();
        let b: Vec<u64> = (0..8).map({
            let mut r = RngStream::new(7, 3).rng();
            move |_| r.gen()
        }).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn streams_differ() {
        let x: u64 = RngStream::new(7, 3).rng().gen();
        let y: u64 = RngStream::new(7, 4).rng().gen();
        let z: u64 = RngStream::new(7, 3).substream(0).rng().gen();
        assert_ne!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn chacha_output_is_pinned() {
        // Guards against silent algorithm changes in the backing crate.
        let v: u64 = RngStream::new(42, 0).rng().gen();
        assert_eq!(v, 12_578_764_544_318_200_737);
    }
}
