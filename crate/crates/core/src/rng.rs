//! Seeded random streams. Every consumer draws from its own stream, derived
//! from the run seed, a purpose salt and an index (zone, household, agent),
//! so results do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Stream {
    Synthesis,
    Cars,
    TransitPass,
    Simulation,
}

impl Stream {
    fn salt(self) -> u64 {
        match self {
            Stream::Synthesis => 0x5157_4e54_4845_5349,
            Stream::Cars => 0x4341_5253_0000_0001,
            Stream::TransitPass => 0x5041_5353_0000_0002,
            Stream::Simulation => 0x5349_4d55_4c41_5445,
        }
    }
}

pub fn stream(seed: u64, kind: Stream, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ kind.salt());
    rng.set_stream(index);
    rng
}
