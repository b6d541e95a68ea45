//! Seeded random streams.
//!
//! All randomness is drawn from ChaCha8 (`rand_chacha`). A master seed is
//! expanded with `seed_from_u64`, and independent work items (sequences,
//! axes, shots batches) select their own 64-bit stream id with
//! `set_stream`. The same `(seed, stream)` pair always yields the same bits,
//! regardless of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
