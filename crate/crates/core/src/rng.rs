//! Seeded random streams.
//!
//! Every stochastic routine draws from ChaCha8, a counter-based generator
//! whose output is fixed by its published algorithm, so a `(seed, stream)`
//! pair gives the same numbers on every platform. Independent sub-tasks
//! (measurement groups, Monte-Carlo trials) use distinct stream ids of the
//! same seed.

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
