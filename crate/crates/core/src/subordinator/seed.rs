use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Identifies one independent random stream.
///
/// The stream is ChaCha8 keyed by `master_seed` (little-endian in the first
/// eight key bytes, remaining bytes zero) with stream number
/// `replicate_index`. Distinct pairs give distinct, non-overlapping streams,
/// so replicates can be generated in any order or on any thread.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub replicate_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, replicate_index: u64) -> Self {
        Self {
            master_seed,
            replicate_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.replicate_index);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a sub-experiment master seed from a parent seed and a tag.
pub fn derive_seed(master_seed: u64, tag: u64) -> u64 {
    splitmix64(master_seed ^ splitmix64(tag))
}
