//! Low-memory fallback: play an inner strategy on the cards `1..=2^b` only.

use crate::bits::{bits_for, BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};

use super::basic::check_state_len;
use super::{AnyGuesser, GuesserSpec};

/// `2^floor(sqrt m)`.
pub fn nominal_domain(m: usize) -> usize {
    1usize << (m as f64).sqrt().floor() as u32
}

/// Bits of the in-domain draw counter, when the inner strategy needs its turn index.
pub fn counter_bits(inner: &GuesserSpec, domain: usize) -> usize {
    if inner.uses_turn_index() {
        bits_for(domain as u64 + 1)
    } else {
        0
    }
}

/// Largest `2^b <= min(2^floor(sqrt m), n)` whose inner layout fits in `m` bits.
pub fn shrunk_domain(inner: &GuesserSpec, m: usize, n: usize) -> Result<usize> {
    let top = (m as f64).sqrt().floor() as u32;
    for b in (1..=top).rev() {
        let domain = 1usize << b;
        if domain > n {
            continue;
        }
        if let Ok(bits) = inner.declared_bits_for(domain) {
            if bits + counter_bits(inner, domain) <= m {
                return Ok(domain);
            }
        }
    }
    Err(Error::param(format!(
        "no domain 2^b <= 2^floor(sqrt {m}) fits {} in {m} bits",
        inner.name()
    )))
}

#[derive(Debug, Clone)]
pub struct ShrunkGuesser {
    n: usize,
    domain: usize,
    inner: Box<AnyGuesser>,
    seen: usize,
    counter_bits: usize,
}

impl ShrunkGuesser {
    pub(crate) fn new(n: usize, domain: usize, inner: AnyGuesser, counter_bits: usize) -> Self {
        ShrunkGuesser {
            n,
            domain,
            inner: Box::new(inner),
            seen: 0,
            counter_bits,
        }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn inner(&self) -> &AnyGuesser {
        &self.inner
    }

    fn inner_turn(&self) -> Turn {
        Turn::new((self.seen + 1).min(self.domain), self.domain)
    }
}

impl Guesser for ShrunkGuesser {
    fn deck_size(&self) -> usize {
        self.n
    }
    fn declared_bits(&self) -> usize {
        self.inner.declared_bits() + self.counter_bits
    }
    fn guess(&mut self, _turn: Turn, coins: &mut Coins) -> Card {
        if self.seen >= self.domain {
            return 1;
        }
        let t = self.inner_turn();
        self.inner.guess(t, coins)
    }
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        if drawn as usize <= self.domain {
            let t = self.inner_turn();
            self.inner.observe(t, drawn);
            self.seen += 1;
        }
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        w.push_bits(&self.inner.save_state());
        if self.counter_bits > 0 {
            w.push_uint(self.seen as u64, self.counter_bits);
        }
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        let inner_bits = self.inner.declared_bits();
        self.inner.load_state(&bits[..inner_bits])?;
        if self.counter_bits > 0 {
            self.seen = BitReader::new(&bits[inner_bits..]).read_uint(self.counter_bits)? as usize;
        }
        Ok(())
    }
}
