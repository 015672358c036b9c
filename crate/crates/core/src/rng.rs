//! Seed splitting.
//!
//! Every random decision draws from a ChaCha8 generator keyed by the master
//! seed and selected by a stream id: `ChaCha8Rng::seed_from_u64(seed)`
//! followed by `set_stream(id)`. Streams are independent, so the order in
//! which stages (or parallel workers) consume randomness never changes the
//! output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GenRng = ChaCha8Rng;

/// Stream ids used by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    ClassSizes,
    Labels,
    Membership,
    Edges,
    /// One stream per attribute column.
    Attribute(usize),
    Presets,
    Stats,
}

impl Stream {
    pub fn id(self) -> u64 {
        match self {
            Stream::ClassSizes => 1,
            Stream::Labels => 2,
            Stream::Membership => 3,
            Stream::Edges => 4,
            Stream::Presets => 5,
            Stream::Stats => 6,
            Stream::Attribute(col) => 0x1_0000 + col as u64,
        }
    }
}

pub fn stream_rng(seed: u64, stream: Stream) -> GenRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
