//! Bit strings, fixed-width field packing and a word-level card bitmap.

use bitvec::prelude::*;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Big-endian bit string used for guesser states and codewords.
pub type BitString = BitVec<u8, Msb0>;
pub type Bits = BitSlice<u8, Msb0>;

/// Number of bits needed to write any value in `0..count`, i.e. `ceil(log2 count)`.
pub fn bits_for(count: u64) -> usize {
    if count <= 1 {
        0
    } else {
        (64 - (count - 1).leading_zeros()) as usize
    }
}

pub fn bits_for_big(count: &BigUint) -> usize {
    if count <= &BigUint::one() {
        0
    } else {
        (count - 1u32).bits() as usize
    }
}

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bits: BitString,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitWriter {
            bits: BitString::with_capacity(bits),
        }
    }

    pub fn push_bit(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    /// Writes the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: usize) {
        debug_assert!(width == 64 || width < 64 && value >> width == 0);
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
    }

    pub fn push_big(&mut self, value: &BigUint, width: usize) {
        debug_assert!(value.bits() as usize <= width);
        for i in (0..width as u64).rev() {
            self.bits.push(value.bit(i));
        }
    }

    pub fn push_bits(&mut self, bits: &Bits) {
        self.bits.extend_from_bitslice(bits);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn finish(self) -> BitString {
        self.bits
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bits: &'a Bits,
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bits: &'a Bits) -> Self {
        BitReader { bits, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }

    fn take(&mut self, width: usize) -> Result<&'a Bits> {
        if self.remaining() < width {
            return Err(Error::MalformedCodeword(format!(
                "needed {width} bits at offset {}, only {} left",
                self.pos,
                self.remaining()
            )));
        }
        let out = &self.bits[self.pos..self.pos + width];
        self.pos += width;
        Ok(out)
    }

    pub fn read_bit(&mut self) -> Result<bool> {
        Ok(self.take(1)?[0])
    }

    pub fn read_uint(&mut self, width: usize) -> Result<u64> {
        assert!(width <= 64);
        Ok(self
            .take(width)?
            .iter()
            .fold(0u64, |acc, b| (acc << 1) | u64::from(*b)))
    }

    pub fn read_big(&mut self, width: usize) -> Result<BigUint> {
        let mut out = BigUint::zero();
        for b in self.take(width)?.iter() {
            out <<= 1u32;
            if *b {
                out += 1u32;
            }
        }
        Ok(out)
    }

    pub fn read_bits(&mut self, width: usize) -> Result<&'a Bits> {
        self.take(width)
    }
}

/// Set of cards `1..=n` stored one bit per card.
/// Position of the `rank`-th set bit of `w` (0-based), by halving the window.
#[inline]
fn select_in_word(mut w: u64, mut rank: u32) -> u32 {
    let mut pos = 0;
    for shift in [32u32, 16, 8, 4, 2, 1] {
        let low = w & ((1u64 << shift) - 1);
        let c = low.count_ones();
        if rank >= c {
            rank -= c;
            w >>= shift;
            pos += shift;
        } else {
            w = low;
        }
    }
    pos
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardSet {
    words: Vec<u64>,
    n: usize,
    len: usize,
}

impl CardSet {
    pub fn empty(n: usize) -> Self {
        CardSet {
            words: vec![0; n.div_ceil(64)],
            n,
            len: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if n % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        CardSet { words, n, len: n }
    }

    pub fn capacity(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, card: u32) -> bool {
        let i = card as usize - 1;
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, card: u32) -> bool {
        let i = card as usize - 1;
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        self.len += usize::from(fresh);
        fresh
    }

    #[inline]
    pub fn remove(&mut self, card: u32) -> bool {
        let i = card as usize - 1;
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let present = self.words[w] & b != 0;
        self.words[w] &= !b;
        self.len -= usize::from(present);
        present
    }

    /// The `rank`-th smallest member (0-based).
    pub fn select(&self, mut rank: usize) -> Option<u32> {
        if rank >= self.len {
            return None;
        }
        for (wi, &w) in self.words.iter().enumerate() {
            let ones = w.count_ones() as usize;
            if rank < ones {
                return Some((wi * 64 + select_in_word(w, rank as u32) as usize + 1) as u32);
            }
            rank -= ones;
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some((wi * 64 + b + 1) as u32)
                }
            })
        })
    }

    pub fn write_bits(&self, out: &mut BitWriter) {
        for c in 1..=self.n as u32 {
            out.push_bit(self.contains(c));
        }
    }

    pub fn read_bits(n: usize, input: &mut BitReader<'_>) -> Result<Self> {
        let mut s = Self::empty(n);
        for c in 1..=n as u32 {
            if input.read_bit()? {
                s.insert(c);
            }
        }
        Ok(s)
    }
}
