//! All randomness flows from one explicit 64-bit seed through ChaCha8
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`), so every sampled point,
//! prime or group element can be replayed from its recorded seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type DetRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> DetRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for sub-task `index` of a seeded run.
pub fn substream(seed: u64, index: u64) -> DetRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}
