//! Following-Subsets: nested ranges `[1..w]`, each with a count and a sum mod `w`.

use crate::bits::{bits_for, BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};

use super::basic::check_state_len;

/// Count and sum (both mod `w`) of the cards of `[1..w]` seen so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeAccumulator {
    pub w: u32,
    pub count: u32,
    pub sum_mod_w: u32,
}

impl RangeAccumulator {
    pub fn new(w: u32) -> Self {
        RangeAccumulator {
            w,
            count: 0,
            sum_mod_w: 0,
        }
    }

    pub fn field_bits(&self) -> usize {
        bits_for(self.w as u64)
    }

    #[inline]
    pub fn add(&mut self, card: Card) {
        debug_assert!(card <= self.w);
        self.count += 1;
        if self.count == self.w {
            self.count = 0;
        }
        // sum < w and card <= w, so one subtraction reduces
        let s = self.sum_mod_w + card;
        self.sum_mod_w = if s >= self.w { s - self.w } else { s };
    }

    /// The unseen card of the range, when exactly one is unseen.
    #[inline]
    pub fn missing(&self) -> Option<Card> {
        if self.count + 1 != self.w {
            return None;
        }
        // 1 + ... + w is w/2 mod w for even w and 0 for odd w
        let total = if self.w % 2 == 0 { self.w / 2 } else { 0 };
        let r = if total >= self.sum_mod_w {
            total - self.sum_mod_w
        } else {
            total + self.w - self.sum_mod_w
        };
        Some(if r == 0 { self.w } else { r })
    }
}

/// Range sizes `2, ~2(1+delta), ...` ending at `n`.
pub fn range_sizes(n: usize, delta: f64) -> Result<Vec<u32>> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::param(format!("delta={delta} outside (0, 1]")));
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::param(format!("Following-Subsets needs n a power of two >= 2, got {n}")));
    }
    let mut sizes = vec![2u32];
    let mut w = 2.0f64;
    while (*sizes.last().unwrap() as usize) < n {
        w *= 1.0 + delta;
        let next = (w.floor() as u64).max(*sizes.last().unwrap() as u64 + 1).min(n as u64) as u32;
        w = w.max(next as f64);
        sizes.push(next);
    }
    Ok(sizes)
}

#[derive(Debug, Clone)]
pub struct FollowingSubsets {
    n: usize,
    ranges: Vec<RangeAccumulator>,
    /// Ranges with exactly one unseen card; derived from the accumulators.
    single: Vec<u64>,
    /// First range that can hold a card of each bit length; derived from the sizes.
    start: [u32; 33],
}

impl FollowingSubsets {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        let ranges: Vec<RangeAccumulator> = range_sizes(n, delta)?.into_iter().map(RangeAccumulator::new).collect();
        let mut start = [0u32; 33];
        for (b, s) in start.iter_mut().enumerate().skip(1) {
            // smallest card with bit length b is 2^(b-1)
            let lo = 1u64 << (b - 1);
            *s = ranges.partition_point(|r| (r.w as u64) < lo) as u32;
        }
        let mut g = FollowingSubsets {
            n,
            single: vec![0; ranges.len().div_ceil(64)],
            start,
            ranges,
        };
        g.refresh();
        Ok(g)
    }

    pub fn layout_bits(n: usize, delta: f64) -> Result<usize> {
        Ok(range_sizes(n, delta)?.iter().map(|&w| 2 * bits_for(w as u64)).sum())
    }

    pub fn ranges(&self) -> &[RangeAccumulator] {
        &self.ranges
    }

    fn refresh(&mut self) {
        for (i, r) in self.ranges.iter().enumerate() {
            let bit = 1u64 << (i % 64);
            if r.count + 1 == r.w {
                self.single[i / 64] |= bit;
            } else {
                self.single[i / 64] &= !bit;
            }
        }
    }
}

impl Guesser for FollowingSubsets {
    fn deck_size(&self) -> usize {
        self.n
    }
    fn declared_bits(&self) -> usize {
        self.ranges.iter().map(|r| 2 * r.field_bits()).sum()
    }
    fn guess(&mut self, _turn: Turn, _coins: &mut Coins) -> Card {
        self.single
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .and_then(|(wi, &w)| self.ranges[wi * 64 + w.trailing_zeros() as usize].missing())
            .unwrap_or(1)
    }
    #[inline]
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        let mut first = self.start[(32 - drawn.leading_zeros()) as usize] as usize;
        while self.ranges[first].w < drawn {
            first += 1;
        }
        for (i, r) in self.ranges.iter_mut().enumerate().skip(first) {
            r.add(drawn);
            let bit = 1u64 << (i % 64);
            if r.count + 1 == r.w {
                self.single[i / 64] |= bit;
            } else {
                self.single[i / 64] &= !bit;
            }
        }
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        for r in &self.ranges {
            w.push_uint(r.count as u64, r.field_bits());
            w.push_uint(r.sum_mod_w as u64, r.field_bits());
        }
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        let mut rd = BitReader::new(bits);
        for r in &mut self.ranges {
            let width = r.field_bits();
            let (count, sum) = (rd.read_uint(width)? as u32, rd.read_uint(width)? as u32);
            if count >= r.w || sum >= r.w {
                return Err(Error::param(format!("accumulator field out of range for w={}", r.w)));
            }
            r.count = count;
            r.sum_mod_w = sum;
        }
        self.refresh();
        Ok(())
    }
}
