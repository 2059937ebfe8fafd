//! Reproducible randomness: per-trial stream derivation and per-turn coins.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
/// Odd constant spacing the per-turn counters far apart.
const TURN_STRIDE: u64 = 0xd1b5_4a32_d192_ed03;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds a sequence of words into one key; order-sensitive.
pub fn mix_words(words: &[u64]) -> u64 {
    words
        .iter()
        .fold(0x243f_6a88_85a3_08d3, |acc, &w| mix64(acc.wrapping_add(GOLDEN) ^ mix64(w)))
}

/// A ChaCha8 generator keyed by a 64-bit key (expanded to the full 256-bit seed).
pub fn chacha_from_key(key: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    for (i, chunk) in seed.chunks_mut(8).enumerate() {
        chunk.copy_from_slice(&mix_words(&[key, i as u64]).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamId {
    GuesserLongLived = 1,
    GuesserOnTheFly = 2,
    Dealer = 3,
}

pub fn stream_key(master_seed: u64, trial: u64, stream: StreamId) -> u64 {
    mix_words(&[master_seed, trial, stream as u64])
}

/// The three independent streams of one trial.
#[derive(Debug, Clone)]
pub struct RandomnessStreams {
    pub guesser_long_lived: ChaCha8Rng,
    /// Key of the read-once coins; turn `t` uses `Coins::new(key, t)`.
    pub guesser_on_the_fly: u64,
    pub dealer: ChaCha8Rng,
}

impl RandomnessStreams {
    pub fn from_keys(long_lived: u64, on_the_fly: u64, dealer: u64) -> Self {
        RandomnessStreams {
            guesser_long_lived: chacha_from_key(long_lived),
            guesser_on_the_fly: on_the_fly,
            dealer: chacha_from_key(dealer),
        }
    }
}

pub fn derive_streams(master_seed: u64, trial: u64) -> RandomnessStreams {
    RandomnessStreams::from_keys(
        stream_key(master_seed, trial, StreamId::GuesserLongLived),
        stream_key(master_seed, trial, StreamId::GuesserOnTheFly),
        stream_key(master_seed, trial, StreamId::Dealer),
    )
}

/// Read-once coins for a single turn: a counter generator keyed by `(key, t)`.
///
/// Guesses are then a pure function of (state, turn, key), which is what lets
/// a decoder replay a game from a saved memory state.
#[derive(Debug, Clone)]
pub struct Coins {
    base: u64,
    counter: u64,
}

impl Coins {
    pub fn new(key: u64, t: usize) -> Self {
        Coins {
            base: key.wrapping_add((t as u64).wrapping_mul(TURN_STRIDE)),
            counter: 0,
        }
    }
}

impl RngCore for Coins {
    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix64(self.base.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        rand_core_fill(self, dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        rand_core_fill(self, dest);
        Ok(())
    }
}

fn rand_core_fill(rng: &mut Coins, dest: &mut [u8]) {
    for chunk in dest.chunks_mut(8) {
        let bytes = rng.next_u64().to_le_bytes();
        chunk.copy_from_slice(&bytes[..chunk.len()]);
    }
}
