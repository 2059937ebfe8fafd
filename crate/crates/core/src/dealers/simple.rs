use std::path::Path;

use rand_chacha::ChaCha8Rng;

use crate::bits::CardSet;
use crate::engine::{Card, Coins, Dealer, Guesser, Turn};
use crate::error::{Error, Result};
use crate::guessers::GuesserSpec;

use super::deck::{Deck, DrawSource};

/// Draws uniformly from the remaining deck every turn.
#[derive(Debug, Clone)]
pub struct ShuffleDealer<S = ChaCha8Rng> {
    n: usize,
    deck: Deck,
    src: S,
    pending: usize,
}

impl<S: DrawSource> ShuffleDealer<S> {
    pub fn new(n: usize, src: S) -> Self {
        ShuffleDealer {
            n,
            deck: Deck::full(n),
            src,
            pending: 0,
        }
    }
}

impl<S: DrawSource> Dealer for ShuffleDealer<S> {
    fn deck_size(&self) -> usize {
        self.n
    }
    #[inline]
    fn commit(&mut self, _turn: Turn) -> Result<Card> {
        self.pending = self.src.pick(self.deck.len());
        Ok(self.deck.card_at(self.pending))
    }
    #[inline]
    fn is_drawable(&self, card: Card) -> bool {
        self.deck.contains(card)
    }
    #[inline]
    fn observe_guess(&mut self, _turn: Turn, _guess: Card) {
        self.deck.remove_at(self.pending);
    }
}

pub fn validate_arrangement(arrangement: &[Card]) -> Result<()> {
    let n = arrangement.len();
    let mut seen = CardSet::empty(n);
    for &c in arrangement {
        if c == 0 || c as usize > n || !seen.insert(c) {
            return Err(Error::InvalidArrangement { n });
        }
    }
    Ok(())
}

/// Draws a fixed arrangement in order. A guess is reasonable iff not yet drawn.
#[derive(Debug, Clone)]
pub struct StaticDealer {
    arrangement: Vec<Card>,
    remaining: CardSet,
    pending: Card,
}

impl StaticDealer {
    pub fn new(arrangement: Vec<Card>) -> Result<Self> {
        validate_arrangement(&arrangement)?;
        let n = arrangement.len();
        Ok(StaticDealer {
            arrangement,
            remaining: CardSet::full(n),
            pending: 0,
        })
    }

    pub fn arrangement(&self) -> &[Card] {
        &self.arrangement
    }
}

impl Dealer for StaticDealer {
    fn deck_size(&self) -> usize {
        self.arrangement.len()
    }
    fn commit(&mut self, turn: Turn) -> Result<Card> {
        self.pending = self.arrangement[turn.t - 1];
        Ok(self.pending)
    }
    fn is_drawable(&self, card: Card) -> bool {
        self.remaining.contains(card)
    }
    fn observe_guess(&mut self, _turn: Turn, _guess: Card) {
        self.remaining.remove(self.pending);
    }
}

/// An arrangement against which the deterministic `spec` scores exactly once:
/// every turn places the smallest remaining card other than the guess.
pub fn adversarial_arrangement_for(spec: &GuesserSpec, n: usize) -> Result<Vec<Card>> {
    if !spec.is_deterministic() {
        return Err(Error::NotDeterministic(spec.name()));
    }
    // No randomness is read, so any generator will do.
    let mut guesser = spec.build(n, &mut crate::engine::chacha_from_key(0))?;
    let mut remaining = CardSet::full(n);
    let mut out = Vec::with_capacity(n);
    for t in 1..=n {
        let turn = Turn::new(t, n);
        let g = guesser.guess(turn, &mut Coins::new(0, t));
        let first = remaining.select(0).expect("deck not empty");
        let card = if first != g || remaining.len() == 1 {
            first
        } else {
            remaining.select(1).expect("two cards left")
        };
        remaining.remove(card);
        guesser.observe(turn, card);
        out.push(card);
    }
    Ok(out)
}

pub fn identity_arrangement(n: usize) -> Vec<Card> {
    (1..=n as Card).collect()
}

pub fn reverse_arrangement(n: usize) -> Vec<Card> {
    (1..=n as Card).rev().collect()
}

/// Position `i` holds card `bitrev(i) + 1`; `n` must be a power of two.
pub fn bit_reversal_arrangement(n: usize) -> Result<Vec<Card>> {
    if !n.is_power_of_two() {
        return Err(Error::param(format!("bit-reversal order needs a power of two, got {n}")));
    }
    let bits = n.trailing_zeros();
    Ok((0..n as u32)
        .map(|i| if bits == 0 { 1 } else { (i.reverse_bits() >> (32 - bits)) + 1 })
        .collect())
}

/// One permutation per non-empty line, cards separated by whitespace or commas.
pub fn parse_arrangements(text: &str) -> Result<Vec<Vec<Card>>> {
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let arr = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<Card>()
                    .map_err(|e| Error::param(format!("bad card `{s}` in arrangement: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        validate_arrangement(&arr)?;
        out.push(arr);
    }
    if out.is_empty() {
        return Err(Error::param("arrangement file has no permutations"));
    }
    Ok(out)
}

pub fn load_arrangements(path: &Path) -> Result<Vec<Vec<Card>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::param(format!("cannot read {}: {e}", path.display())))?;
    parse_arrangements(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrangements_are_permutations() {
        for n in [1usize, 2, 8, 64] {
            validate_arrangement(&identity_arrangement(n)).unwrap();
            validate_arrangement(&reverse_arrangement(n)).unwrap();
            validate_arrangement(&bit_reversal_arrangement(n).unwrap()).unwrap();
        }
        assert_eq!(bit_reversal_arrangement(8).unwrap(), vec![1, 5, 3, 7, 2, 6, 4, 8]);
        assert_eq!(validate_arrangement(&[1, 1, 3]), Err(Error::InvalidArrangement { n: 3 }));
        assert!(StaticDealer::new(vec![2, 3]).is_err());
    }

    #[test]
    fn parse_file_format() {
        let arrs = parse_arrangements("3 1 2\n# comment\n\n1,2,3\n").unwrap();
        assert_eq!(arrs, vec![vec![3, 1, 2], vec![1, 2, 3]]);
        assert!(parse_arrangements("1 2 2").is_err());
    }

    #[test]
    fn memoryless_adversary_puts_its_card_last() {
        let arr = adversarial_arrangement_for(&GuesserSpec::Memoryless { card: 4 }, 6).unwrap();
        assert_eq!(*arr.last().unwrap(), 4);
        validate_arrangement(&arr).unwrap();
    }

    #[test]
    fn randomized_guessers_are_refused() {
        assert!(matches!(
            adversarial_arrangement_for(&GuesserSpec::Perfect, 8),
            Err(Error::NotDeterministic(_))
        ));
    }
}
