//! Deterministic generator: ChaCha8 keyed by a 64-bit seed, one stream per shard.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

pub type Rng = ChaCha8Rng;

/// Generator for `(seed, stream)`; identical across runs and platforms.
pub fn seeded(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
