//! Named, independent random streams derived from one user seed.
//!
//! A stream's key is `sha256(seed_le_bytes || name)`, used directly as a
//! ChaCha8 key, so adding a new consumer never perturbs existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub type Rng = ChaCha8Rng;

pub fn stream(seed: u64, name: &str) -> Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(name.as_bytes());
    let key: [u8; 32] = h.finalize().into();
    ChaCha8Rng::from_seed(key)
}
