//! Independent random streams keyed by `(seed, trial, edge, stream)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const STREAM_LOADING: u64 = 0;
pub(crate) const STREAM_CATALYSIS: u64 = 1;
/// Auxiliary path `i` uses stream `STREAM_AUX_BASE + i`.
pub(crate) const STREAM_AUX_BASE: u64 = 2;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The key depends on `(seed, trial)`; `(edge, stream)` select the ChaCha
/// stream, so draws never depend on scheduling.
pub(crate) fn stream_rng(seed: u64, trial: u64, edge: u32, stream: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed) ^ trial);
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(((edge as u64) << 32) | stream);
    rng
}
