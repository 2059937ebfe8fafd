//! Prefix-free encoders that turn guessing success into shorter descriptions.
//!
//! Field order is indicator, memory state, tagged turns, correctness vector
//! (unordered codec only), remaining cards. Every field is big-endian and has
//! a fixed width given the indicator, so codewords are prefix-free by layout.

mod length;
mod ordered;
pub mod rank;
mod unordered;

pub use length::{codeword_length_w, compression_diagnostics, compression_threshold, subset_entropy, CompressionRow};
pub use ordered::{best_prefix, decode_o, encode_o, ordered_explicit_length, ordered_length};
pub use rank::{
    binomial, falling, rank_ordered, rank_subset, unrank_ordered, unrank_subset, OrderedRank, SubsetRank,
};
pub use unordered::{
    check_codec_schedule, decode_u, encode_u, record_epoch, unordered_explicit_length, unordered_length,
    EpochRecord,
};

use crate::bits::BitString;
use crate::engine::{chacha_from_key, Coins};
use crate::error::Result;
use crate::guessers::{AnyGuesser, GuesserSpec};

/// A guesser with all of its randomness fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamma {
    pub spec: GuesserSpec,
    pub long_lived: u64,
    pub on_the_fly: u64,
}

impl Gamma {
    pub fn new(spec: GuesserSpec, long_lived: u64, on_the_fly: u64) -> Self {
        Gamma {
            spec,
            long_lived,
            on_the_fly,
        }
    }

    pub fn build(&self, n: usize) -> Result<AnyGuesser> {
        self.spec.build(n, &mut chacha_from_key(self.long_lived))
    }

    pub fn coins(&self, t: usize) -> Coins {
        Coins::new(self.on_the_fly, t)
    }
}

/// True iff no codeword is a prefix of another (equal codewords count as prefixes).
pub fn is_prefix_free(codes: &[BitString]) -> bool {
    let mut sorted: Vec<&BitString> = codes.iter().collect();
    sorted.sort();
    sorted.windows(2).all(|w| !w[1].starts_with(w[0].as_bitslice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bitvec::prelude::*;

    #[test]
    fn prefix_check() {
        let a: BitString = bitvec![u8, Msb0; 1, 0];
        let b: BitString = bitvec![u8, Msb0; 1, 0, 1];
        let c: BitString = bitvec![u8, Msb0; 0, 1, 1];
        assert!(is_prefix_free(&[a.clone(), c.clone()]));
        assert!(!is_prefix_free(&[b, c.clone(), a.clone()]));
        assert!(!is_prefix_free(&[a.clone(), a]));
    }
}
