use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator handed to every replicate.
pub type StreamRng = ChaCha8Rng;

/// Identifies one counter-addressed random stream.
///
/// `(master_seed, stream_id)` fully determines the stream. Replicate `b` of a
/// job runs on `stream_id = b`, so results never depend on execution order or
/// on how many threads share the work.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, stream_id: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_id,
        }
    }

    pub const fn from_master(master_seed: u64) -> Self {
        SeedSpec::new(master_seed, 0)
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Same master seed, different stream.
    pub const fn stream(&self, stream_id: u64) -> Self {
        SeedSpec::new(self.master_seed, stream_id)
    }

    /// A fresh job seed derived from this one and a tag. Sub-jobs (one per
    /// subsample size, dataset, ...) fork so their replicate streams never
    /// collide with each other.
    pub fn fork(&self, tag: u64) -> Self {
        let mixed = splitmix64(splitmix64(self.master_seed) ^ splitmix64(self.stream_id ^ 0x5851_f42d_4c95_7f2d))
            ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15));
        SeedSpec::new(splitmix64(mixed), 0)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
