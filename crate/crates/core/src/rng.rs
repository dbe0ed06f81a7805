//! Deterministic random streams.
//!
//! Every replication gets one derived seed. From that seed we open a ChaCha8
//! generator per purpose: stream 0 drives policy randomness and stream `a + 1`
//! produces the rewards of arm `a`. The k-th reward of an arm therefore never
//! depends on which arms were pulled before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function. A bijection on `u64`.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `index` under `root_seed`.
///
/// Injective in `index` for a fixed root: `index * GOLDEN_GAMMA` is a bijection
/// modulo 2^64 (the multiplier is odd) and so is `mix64`.
pub fn derive_seed(root_seed: u64, index: u64) -> u64 {
    mix64(root_seed.wrapping_add(index.wrapping_mul(GOLDEN_GAMMA)))
}

/// The random streams owned by a single replication.
#[derive(Debug, Clone)]
pub struct ReplicationStreams {
    pub policy: ChaCha8Rng,
    pub arms: Vec<ChaCha8Rng>,
}

impl ReplicationStreams {
    pub fn new(seed: u64, num_arms: usize) -> Self {
        let open = |stream: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            rng
        };
        ReplicationStreams {
            policy: open(0),
            arms: (0..num_arms as u64).map(|a| open(a + 1)).collect(),
        }
    }
}
