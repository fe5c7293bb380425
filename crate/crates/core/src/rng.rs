//! Seeded, splittable randomness.
//!
//! A [`RandomSource`] is a coordinate `(seed, path)` in a tree of streams.
//! Materialising it with [`RandomSource::rng`] yields a ChaCha8 generator
//! whose key is a hash of the coordinate, so a stream depends only on where
//! it sits in the tree and never on the order in which siblings are used.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a, used to turn experiment names into child indices.
pub fn label_index(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    seed: u64,
    path: Vec<u64>,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { seed, path: Vec::new() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path(&self) -> &[u64] {
        &self.path
    }

    /// Child stream at `path ++ [child]`. The parent is left untouched.
    pub fn split(&self, child: u64) -> Self {
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend_from_slice(&self.path);
        path.push(child);
        Self { seed: self.seed, path }
    }

    pub fn split_named(&self, label: &str) -> Self {
        self.split(label_index(label))
    }

    fn key(&self) -> [u8; 32] {
        let mut state = mix64(self.seed ^ 0x5851_F42D_4C95_7F2D);
        // Length is folded in so that e.g. [] and [0] never alias.
        state = mix64(state ^ (self.path.len() as u64).wrapping_mul(GOLDEN));
        for &c in &self.path {
            state = mix64(state.rotate_left(23) ^ mix64(c.wrapping_add(GOLDEN)));
        }
        let mut key = [0u8; 32];
        for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
            let word = mix64(state.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1)));
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        key
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.key())
    }
}
