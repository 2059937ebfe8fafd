//! Ranks of subsets (combinadic, lexicographic on sorted sets) and of ordered
//! selections (falling-factorial radix).

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bits::{bits_for_big, BitReader, BitWriter};
use crate::engine::Card;
use crate::error::{Error, Result};

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `n (n-1) ... (n-k+1)`.
pub fn falling(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
    }
    acc
}

fn out_of_range(rank: &BigUint, size: &BigUint) -> Error {
    Error::RankOutOfRange {
        rank: rank.to_string(),
        size: size.to_string(),
    }
}

fn check_cards(cards: &[Card], n: usize) -> Result<()> {
    let mut seen = crate::bits::CardSet::empty(n);
    for &c in cards {
        if c == 0 || c as usize > n || !seen.insert(c) {
            return Err(Error::param(format!("cards must be distinct and in 1..={n}, got {c}")));
        }
    }
    Ok(())
}

/// A `k`-subset of `1..=n` by its lexicographic rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetRank {
    pub n: usize,
    pub k: usize,
    pub rank: BigUint,
}

impl SubsetRank {
    pub fn of(cards: &[Card], n: usize) -> Result<Self> {
        Ok(SubsetRank {
            n,
            k: cards.len(),
            rank: rank_subset(cards, n)?,
        })
    }

    pub fn cards(&self) -> Result<Vec<Card>> {
        unrank_subset(&self.rank, self.n, self.k)
    }

    pub fn width(n: usize, k: usize) -> usize {
        bits_for_big(&binomial(n, k))
    }

    pub fn write(&self, out: &mut BitWriter) {
        out.push_big(&self.rank, Self::width(self.n, self.k));
    }

    pub fn read(n: usize, k: usize, input: &mut BitReader<'_>) -> Result<Self> {
        let rank = input.read_big(Self::width(n, k))?;
        let size = binomial(n, k);
        if rank >= size {
            return Err(out_of_range(&rank, &size));
        }
        Ok(SubsetRank { n, k, rank })
    }
}

pub fn rank_subset(cards: &[Card], n: usize) -> Result<BigUint> {
    check_cards(cards, n)?;
    let mut sorted: Vec<usize> = cards.iter().map(|&c| c as usize - 1).collect();
    sorted.sort_unstable();
    let k = sorted.len();
    let mut rank = BigUint::zero();
    let mut lo = 0;
    for (i, &a) in sorted.iter().enumerate() {
        // Sets agreeing on the first i elements whose (i+1)-th lies in lo..a:
        // sum_{v=lo}^{a-1} C(n-1-v, k-1-i) = C(n-lo, k-i) - C(n-a, k-i).
        rank += binomial(n - lo, k - i) - binomial(n - a, k - i);
        lo = a + 1;
    }
    Ok(rank)
}

pub fn unrank_subset(rank: &BigUint, n: usize, k: usize) -> Result<Vec<Card>> {
    let size = binomial(n, k);
    if *rank >= size {
        return Err(out_of_range(rank, &size));
    }
    let mut r = rank.clone();
    let mut out = Vec::with_capacity(k);
    let mut v = 0;
    for i in 0..k {
        loop {
            let count = binomial(n - 1 - v, k - 1 - i);
            if r < count {
                break;
            }
            r -= count;
            v += 1;
        }
        out.push(v as Card + 1);
        v += 1;
    }
    Ok(out)
}

/// An ordered selection of `k` distinct cards from `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedRank {
    pub n: usize,
    pub k: usize,
    pub rank: BigUint,
}

impl OrderedRank {
    pub fn of(cards: &[Card], n: usize) -> Result<Self> {
        Ok(OrderedRank {
            n,
            k: cards.len(),
            rank: rank_ordered(cards, n)?,
        })
    }

    pub fn cards(&self) -> Result<Vec<Card>> {
        unrank_ordered(&self.rank, self.n, self.k)
    }

    pub fn width(n: usize, k: usize) -> usize {
        bits_for_big(&falling(n, k))
    }

    pub fn write(&self, out: &mut BitWriter) {
        out.push_big(&self.rank, Self::width(self.n, self.k));
    }

    pub fn read(n: usize, k: usize, input: &mut BitReader<'_>) -> Result<Self> {
        let rank = input.read_big(Self::width(n, k))?;
        let size = falling(n, k);
        if rank >= size {
            return Err(out_of_range(&rank, &size));
        }
        Ok(OrderedRank { n, k, rank })
    }
}

/// Digit `i` is the position of card `i` among the cards not used before it.
pub fn rank_ordered(cards: &[Card], n: usize) -> Result<BigUint> {
    check_cards(cards, n)?;
    let mut unused: Vec<Card> = (1..=n as Card).collect();
    let mut rank = BigUint::zero();
    for (i, &c) in cards.iter().enumerate() {
        let d = unused.binary_search(&c).expect("card checked above");
        unused.remove(d);
        rank = rank * (n - i) + d;
    }
    Ok(rank)
}

pub fn unrank_ordered(rank: &BigUint, n: usize, k: usize) -> Result<Vec<Card>> {
    let size = falling(n, k);
    if *rank >= size {
        return Err(out_of_range(rank, &size));
    }
    let mut r = rank.clone();
    let mut digits = vec![0usize; k];
    for i in (0..k).rev() {
        let radix = BigUint::from(n - i);
        digits[i] = (&r % &radix).to_usize().expect("digit below radix");
        r /= radix;
    }
    let mut unused: Vec<Card> = (1..=n as Card).collect();
    Ok(digits.into_iter().map(|d| unused.remove(d)).collect())
}
