use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream used for instance data.
pub const INSTANCE_STREAM: u64 = 0;
/// Stream used for initial points.
pub const START_STREAM: u64 = 1;

/// The generator behind every random instance and starting point.
///
/// ChaCha8 output is stable across releases of `rand_chacha`, so a seed
/// pins an instance permanently.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
