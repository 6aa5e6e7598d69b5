//! Seeded randomness.
//!
//! Every random choice in the crate draws from ChaCha8 (`rand_chacha`). The
//! 64-bit user seed is expanded to the 256-bit ChaCha key by
//! `SeedableRng::seed_from_u64` (a PCG32 stream), and independent sub-streams
//! (retry attempts, restarts) select the ChaCha stream id. ChaCha output is
//! specified bit-for-bit, so a `(seed, stream)` pair yields the same sequence
//! on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
