//! Counter-based seed splitting.
//!
//! Every random stream of an experiment is a ChaCha8 stream keyed by the
//! master seed; the 64-bit stream id is `4 * index + purpose`, where `index`
//! is the repetition (or graph) number. Streams never overlap, so episodes
//! can run in any order or in parallel and still reproduce bit for bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamPurpose {
    /// Loss-sequence generation (index 0: one sequence per experiment).
    Losses = 0,
    /// Graph generation.
    Graph = 1,
    /// Observation noise of repetition `index`.
    Noise = 2,
    /// The learner's arm draws in repetition `index`.
    Sampling = 3,
}

pub fn stream_rng(master: u64, purpose: StreamPurpose, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index.wrapping_mul(4).wrapping_add(purpose as u64));
    rng
}
