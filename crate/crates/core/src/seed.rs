//! Seed derivation and the RNG type used by every stochastic component.
//!
//! All randomness in a workflow flows from one user-visible `u64`. Sub-seeds
//! are produced by hashing the parent seed together with a label, so adding a
//! new consumer never perturbs the streams of existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic, platform-independent generator used throughout the crate.
pub type SwarmRng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Incremental FNV-1a over labelled parts, finalized with a splitmix64 mix.
#[derive(Debug, Clone, Copy)]
pub struct SeedHasher(u64);

impl SeedHasher {
    pub fn new(base: u64) -> Self {
        let mut h = SeedHasher(FNV_OFFSET);
        h.write_bytes(&base.to_le_bytes());
        h
    }

    fn write_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
        // field separator so ("ab", "c") and ("a", "bc") differ
        self.0 ^= 0xff;
        self.0 = self.0.wrapping_mul(FNV_PRIME);
    }

    pub fn str(mut self, s: &str) -> Self {
        self.write_bytes(s.as_bytes());
        self
    }

    pub fn u64(mut self, v: u64) -> Self {
        self.write_bytes(&v.to_le_bytes());
        self
    }

    pub fn finish(self) -> u64 {
        splitmix64(self.0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-seed for a named consumer of `base`.
pub fn derive(base: u64, label: &str) -> u64 {
    SeedHasher::new(base).str(label).finish()
}

pub fn rng_from_seed(seed: u64) -> SwarmRng {
    SwarmRng::seed_from_u64(seed)
}
