//! Seeded random streams.
//!
//! A run is fixed by a base seed. Replica `i` draws from substream `i` of the
//! ChaCha generator seeded by the base seed, so results do not depend on how
//! replicas are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the library.
pub type LabRng = ChaCha8Rng;

/// Generator for the base seed itself (substream 0).
pub fn seeded(seed: u64) -> LabRng {
    LabRng::seed_from_u64(seed)
}

/// Independent stream number `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> LabRng {
    let mut rng = LabRng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
