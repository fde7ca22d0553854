//! Deterministic random substreams.
//!
//! Every random draw in the crate comes from a `ChaCha8Rng` (the portable
//! ChaCha stream cipher with 8 rounds from `rand_chacha`). A run has one
//! master seed. Each learner in each period gets its own ChaCha stream:
//!
//! ```text
//! key    = ChaCha8Rng::seed_from_u64(master_seed)
//! stream = domain << 56 | period << 24 | learner
//! ```
//!
//! where `learner` is 0 for the jammer and `n + 1` for UAV `n`. Adding a UAV
//! therefore never perturbs the draws of existing learners, and periods are
//! independent of each other. Sweep points derive their master seed from the
//! user seed and the point's parameter values (not its position in the sweep)
//! via [`derive_seed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Jammer { period: usize },
    Uav { period: usize, uav: usize },
    RandomBaseline { period: usize },
    NonCooperative { period: usize },
}

impl Stream {
    pub fn id(self) -> u64 {
        let (domain, period, learner) = match self {
            Stream::Jammer { period } => (0u64, period, 0u64),
            Stream::Uav { period, uav } => (0, period, uav as u64 + 1),
            Stream::RandomBaseline { period } => (1, period, 0),
            Stream::NonCooperative { period } => (2, period, 0),
        };
        debug_assert!(period < (1 << 32) && learner < (1 << 24));
        (domain << 56) | ((period as u64) << 24) | learner
    }
}

pub fn substream(master_seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream.id());
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a list of tags into a new seed.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(seed), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}
