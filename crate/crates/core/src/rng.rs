//! Keyed random substreams.
//!
//! Every consumer of randomness in a run gets its own ChaCha8 stream whose
//! key is derived from the master seed and a purpose tag, and whose 64-bit
//! stream id is a counter (area id, or year and day). Results therefore do
//! not depend on the order or thread in which substreams are consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a substream is used for. Each purpose gets an independent key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Layout = 1,
    Stations = 2,
    EventCount = 3,
    EventTime = 4,
    EventDuration = 5,
    EventLocation = 6,
    Synthetic = 7,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the substream for `(master_seed, purpose, index)`.
pub fn substream(master_seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut state = master_seed ^ (purpose as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Stream index for a simulated (year, day) pair.
pub fn day_index(year: u32, day: u32) -> u64 {
    (u64::from(year) << 32) | u64::from(day)
}
