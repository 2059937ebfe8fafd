use rand::seq::index;
use rand::Rng;

use crate::bits::{BitReader, BitString, BitWriter, Bits, CardSet};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};

pub(crate) fn check_state_len(bits: &Bits, expected: usize) -> Result<()> {
    if bits.len() != expected {
        return Err(Error::param(format!(
            "state is {} bits, layout declares {expected}",
            bits.len()
        )));
    }
    Ok(())
}

/// Guesses the same card every turn.
#[derive(Debug, Clone)]
pub struct Memoryless {
    n: usize,
    card: Card,
}

impl Memoryless {
    pub fn new(n: usize, card: Card) -> Result<Self> {
        if card == 0 || card as usize > n {
            return Err(Error::param(format!("fixed card {card} not in 1..={n}")));
        }
        Ok(Memoryless { n, card })
    }
}

impl Guesser for Memoryless {
    fn deck_size(&self) -> usize {
        self.n
    }
    fn declared_bits(&self) -> usize {
        0
    }
    fn guess(&mut self, _turn: Turn, _coins: &mut Coins) -> Card {
        self.card
    }
    fn observe(&mut self, _turn: Turn, _drawn: Card) {}
    fn save_state(&self) -> BitString {
        BitString::new()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, 0)
    }
}

/// Remembers every undrawn card and guesses uniformly among them.
#[derive(Debug, Clone)]
pub struct PerfectMemory {
    unseen: CardSet,
}

impl PerfectMemory {
    pub fn new(n: usize) -> Self {
        PerfectMemory {
            unseen: CardSet::full(n),
        }
    }
}

impl Guesser for PerfectMemory {
    fn deck_size(&self) -> usize {
        self.unseen.capacity()
    }
    fn declared_bits(&self) -> usize {
        self.unseen.capacity()
    }
    fn guess(&mut self, _turn: Turn, coins: &mut Coins) -> Card {
        if self.unseen.is_empty() {
            return 1;
        }
        let r = coins.gen_range(0..self.unseen.len());
        self.unseen.select(r).expect("rank below len")
    }
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        self.unseen.remove(drawn);
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        self.unseen.write_bits(&mut w);
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        self.unseen = CardSet::read_bits(self.unseen.capacity(), &mut BitReader::new(bits))?;
        Ok(())
    }
}

/// Tracks a fixed random set `A` of `m` cards, one presence bit each.
#[derive(Debug, Clone)]
pub struct SubsetGuesser {
    n: usize,
    cards: Vec<Card>,
    /// Indices `1..=m` into `cards` not yet drawn.
    unseen: CardSet,
    /// Membership in `cards`; derived, not part of the state.
    member: CardSet,
}

impl SubsetGuesser {
    pub fn sample<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::param(format!("subset size {m} not in 1..={n}")));
        }
        let mut cards: Vec<Card> = index::sample(rng, n, m).iter().map(|i| i as Card + 1).collect();
        cards.sort_unstable();
        Ok(Self::with_cards(n, cards))
    }

    /// `cards` must be sorted and distinct.
    pub fn with_cards(n: usize, cards: Vec<Card>) -> Self {
        let unseen = CardSet::full(cards.len());
        let mut member = CardSet::empty(cards.last().map_or(n, |&c| n.max(c as usize)));
        cards.iter().for_each(|&c| {
            member.insert(c);
        });
        SubsetGuesser {
            n,
            cards,
            unseen,
            member,
        }
    }

    pub fn cards(&self) -> &[Card] {
        &self.cards
    }

    pub fn exhausted(&self) -> bool {
        self.unseen.is_empty()
    }

    pub(crate) fn pick(&self, coins: &mut Coins) -> Option<Card> {
        if self.unseen.is_empty() {
            return None;
        }
        let r = coins.gen_range(0..self.unseen.len());
        let idx = self.unseen.select(r).expect("rank below len");
        Some(self.cards[idx as usize - 1])
    }

    #[inline]
    pub(crate) fn mark(&mut self, drawn: Card) {
        if !self.member.contains(drawn) {
            return;
        }
        if let Ok(i) = self.cards.binary_search(&drawn) {
            self.unseen.remove(i as u32 + 1);
        }
    }

    pub(crate) fn write(&self, w: &mut BitWriter) {
        self.unseen.write_bits(w);
    }

    pub(crate) fn read(&mut self, r: &mut BitReader<'_>) -> Result<()> {
        self.unseen = CardSet::read_bits(self.cards.len(), r)?;
        Ok(())
    }
}

impl Guesser for SubsetGuesser {
    fn deck_size(&self) -> usize {
        self.n
    }
    fn declared_bits(&self) -> usize {
        self.cards.len()
    }
    fn guess(&mut self, _turn: Turn, coins: &mut Coins) -> Card {
        // Once A is exhausted every guess is wasted; a[0] keeps it deterministic.
        self.pick(coins).unwrap_or(self.cards[0])
    }
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        self.mark(drawn);
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.cards.len());
        self.write(&mut w);
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        self.read(&mut BitReader::new(bits))
    }
}
