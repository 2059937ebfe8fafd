//! Randomized-Subsets: a secret pairwise permutation splits the deck into dyadic
//! buckets; late in the game the bucket matched to the cards left is followed.

use rand::seq::index;
use rand::Rng;

use crate::bits::{bits_for, BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::Result;
use crate::hashing::{bucket_of, bucket_range, bucket_size, sample_pairwise, Field, FieldSpec, PairwisePerm};

use super::basic::{check_state_len, SubsetGuesser};

/// Bucket followed when `cards_left <= n/2`: `floor(log2(n / (2 cards_left)))`
/// clamped to `1..=ell`.
#[inline]
pub fn target_bucket(n: usize, cards_left: usize, ell: u32) -> u32 {
    let mut j = 0u32;
    while j < ell && (cards_left as u64) << (j + 2) <= n as u64 {
        j += 1;
    }
    j.clamp(1, ell)
}

/// Bits of the bucket accumulators alone: `ell^2 - ell + 2`.
pub fn bucket_layout_bits(ell: u32) -> usize {
    (1..=ell).map(|j| 2 * bits_for(bucket_size(j) as u64)).sum()
}

#[derive(Debug, Clone)]
pub struct RandomizedSubsets {
    n: usize,
    ell: u32,
    h: PairwisePerm,
    /// Indexed by bucket; entry 0 unused.
    count: Vec<u32>,
    sum: Vec<u32>,
    first_half: SubsetGuesser,
}

impl RandomizedSubsets {
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let spec = FieldSpec::for_deck(n)?;
        let ell = spec.ell;
        let h = sample_pairwise(Field::new(spec), rng);
        let a_size = Self::first_half_size(n);
        let mut a: Vec<Card> = index::sample(rng, n, a_size).iter().map(|i| i as Card + 1).collect();
        a.sort_unstable();
        Ok(RandomizedSubsets {
            n,
            ell,
            h,
            count: vec![0; ell as usize + 1],
            sum: vec![0; ell as usize + 1],
            first_half: SubsetGuesser::with_cards(n, a),
        })
    }

    /// `|A| = log^2 n`, capped at `n`.
    pub fn first_half_size(n: usize) -> usize {
        let ell = n.trailing_zeros() as usize;
        (ell * ell).clamp(1, n)
    }

    pub fn layout_bits(n: usize) -> usize {
        bucket_layout_bits(n.trailing_zeros()) + Self::first_half_size(n)
    }

    pub fn bucket_bits(&self) -> usize {
        bucket_layout_bits(self.ell)
    }

    pub fn first_half_bits(&self) -> usize {
        self.first_half.declared_bits()
    }

    pub fn permutation(&self) -> &PairwisePerm {
        &self.h
    }

    /// The single unseen card of bucket `j`, if there is exactly one.
    pub fn bucket_missing(&self, j: u32) -> Option<Card> {
        let size = bucket_size(j);
        if self.count[j as usize] + 1 != size {
            return None;
        }
        let s = size as u64;
        let total = s * (s - 1) / 2 % s;
        let offset = (total + s - self.sum[j as usize] as u64) % s;
        let (lo, _) = bucket_range(j);
        Some(self.h.card_of_value(lo + offset as u32))
    }
}

impl Guesser for RandomizedSubsets {
    fn deck_size(&self) -> usize {
        self.n
    }
    fn declared_bits(&self) -> usize {
        self.bucket_bits() + self.first_half_bits()
    }
    fn guess(&mut self, turn: Turn, coins: &mut Coins) -> Card {
        let c = turn.cards_left();
        if 2 * c > self.n {
            return self.first_half.pick(coins).unwrap_or(1);
        }
        self.bucket_missing(target_bucket(self.n, c, self.ell)).unwrap_or(1)
    }
    #[inline]
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        let y = self.h.hash_card(drawn);
        let j = bucket_of(y, self.ell);
        let size = bucket_size(j);
        let (lo, _) = bucket_range(j);
        let jj = j as usize;
        self.count[jj] = (self.count[jj] + 1) & (size - 1);
        self.sum[jj] = (self.sum[jj] + (y - lo)) & (size - 1);
        self.first_half.mark(drawn);
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        for j in 1..=self.ell {
            let width = bits_for(bucket_size(j) as u64);
            w.push_uint(self.count[j as usize] as u64, width);
            w.push_uint(self.sum[j as usize] as u64, width);
        }
        self.first_half.write(&mut w);
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        let mut r = BitReader::new(bits);
        for j in 1..=self.ell {
            let width = bits_for(bucket_size(j) as u64);
            self.count[j as usize] = r.read_uint(width)? as u32;
            self.sum[j as usize] = r.read_uint(width)? as u32;
        }
        self.first_half.read(&mut r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bucket_bits_at_1024() {
        assert_eq!(bucket_layout_bits(10), 92);
        assert_eq!(RandomizedSubsets::layout_bits(1024), 92 + 100);
    }

    #[test]
    fn target_bucket_schedule() {
        let n = 1024;
        assert_eq!(target_bucket(n, n / 4, 10), 1);
        assert_eq!(target_bucket(n, n / 2, 10), 1);
        assert_eq!(target_bucket(n, n / 8, 10), 2);
        assert_eq!(target_bucket(n, n / 8 + 1, 10), 1);
        assert_eq!(target_bucket(n, 1, 10), 9);
    }

    #[test]
    fn buckets_recover_their_last_card() {
        let n = 256;
        let mut rng = crate::engine::chacha_from_key(5);
        let mut g = RandomizedSubsets::sample(n, &mut rng).unwrap();
        let h = *g.permutation();
        // draw everything except one card of bucket 5
        let bucket5: Vec<Card> = (1..=n as Card).filter(|&c| bucket_of(h.hash_card(c), 8) == 5).collect();
        let keep = bucket5[3];
        let mut t = 1;
        for c in (1..=n as Card).filter(|&c| c != keep) {
            g.observe(Turn::new(t, n), c);
            t += 1;
        }
        assert_eq!(g.bucket_missing(5), Some(keep));
        assert_eq!(g.bucket_missing(4), None);
    }
}
