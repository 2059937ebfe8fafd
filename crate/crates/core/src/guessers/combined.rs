use rand::Rng;

use crate::bits::{bits_for, BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};

use super::basic::{check_state_len, SubsetGuesser};
use super::power_sum::PowerSumGuesser;

/// A subset guesser for the early game and power sums for the last `k` turns.
///
/// `k = floor(m / (2 log n))`; the subset gets whatever the power sums leave of
/// the `m` bits, so the whole state fits in `m`.
#[derive(Debug, Clone)]
pub struct CombinedGuesser {
    subset: SubsetGuesser,
    tail: PowerSumGuesser,
}

impl CombinedGuesser {
    /// `(subset size, k)` for budget `m`.
    pub fn split(n: usize, m: usize) -> Result<(usize, usize)> {
        if m * m > n {
            return Err(Error::param(format!("combined guesser needs m <= sqrt(n), got m={m}, n={n}")));
        }
        let log_n = bits_for(n as u64).max(1);
        let k = (m / (2 * log_n)).max(1);
        let tail_bits = PowerSumGuesser::layout_bits(n, k);
        if tail_bits >= m {
            return Err(Error::param(format!(
                "m={m} cannot hold {k} power sums ({tail_bits} bits) and a subset"
            )));
        }
        Ok((m - tail_bits, k))
    }

    pub fn sample<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        let (size, k) = Self::split(n, m)?;
        Ok(CombinedGuesser {
            subset: SubsetGuesser::sample(n, size, rng)?,
            tail: PowerSumGuesser::new(n, k)?,
        })
    }

    pub fn subset_size(&self) -> usize {
        self.subset.cards().len()
    }

    pub fn k(&self) -> usize {
        self.tail.state().k()
    }
}

impl Guesser for CombinedGuesser {
    fn deck_size(&self) -> usize {
        self.subset.deck_size()
    }
    fn declared_bits(&self) -> usize {
        self.subset.declared_bits() + self.tail.declared_bits()
    }
    fn guess(&mut self, turn: Turn, coins: &mut Coins) -> Card {
        self.subset
            .pick(coins)
            .or_else(|| self.tail.pick(turn, coins))
            .unwrap_or(self.subset.cards()[0])
    }
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        self.subset.mark(drawn);
        self.tail.mark(drawn);
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        self.subset.write(&mut w);
        self.tail.write(&mut w);
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        let mut r = BitReader::new(bits);
        self.subset.read(&mut r)?;
        self.tail.read(&mut r)
    }
}
