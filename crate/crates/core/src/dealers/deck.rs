use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::bits::CardSet;
use crate::engine::Card;

/// Where a dealer's uniform choices come from.
pub trait DrawSource {
    /// Uniform index in `0..len`.
    fn pick(&mut self, len: usize) -> usize;
}

impl DrawSource for ChaCha8Rng {
    #[inline]
    fn pick(&mut self, len: usize) -> usize {
        self.gen_range(0..len)
    }
}

/// Remaining cards, split into a drawable prefix and a moved-to-the-back tail.
#[derive(Debug, Clone)]
pub struct Deck {
    cards: Vec<Card>,
    drawable: usize,
    present: CardSet,
    back: CardSet,
}

impl Deck {
    pub fn full(n: usize) -> Self {
        Self::from_cards(n, 1..=n as Card)
    }

    pub fn from_cards(n: usize, cards: impl IntoIterator<Item = Card>) -> Self {
        let cards: Vec<Card> = cards.into_iter().collect();
        let mut present = CardSet::empty(n);
        for &c in &cards {
            present.insert(c);
        }
        Deck {
            drawable: cards.len(),
            cards,
            present,
            back: CardSet::empty(n),
        }
    }

    pub fn len(&self) -> usize {
        self.cards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cards.is_empty()
    }

    pub fn drawable_len(&self) -> usize {
        self.drawable
    }

    pub fn back_len(&self) -> usize {
        self.cards.len() - self.drawable
    }

    #[inline]
    pub fn card_at(&self, i: usize) -> Card {
        self.cards[i]
    }

    #[inline]
    pub fn contains(&self, card: Card) -> bool {
        self.present.contains(card)
    }

    #[inline]
    pub fn is_drawable(&self, card: Card) -> bool {
        self.present.contains(card) && !self.back.contains(card)
    }

    pub fn is_back(&self, card: Card) -> bool {
        self.back.contains(card)
    }

    /// Removes the drawable card at index `i`.
    #[inline]
    pub fn remove_at(&mut self, i: usize) -> Card {
        debug_assert!(i < self.drawable);
        let c = self.cards[i];
        let last = self.cards.len() - 1;
        self.cards.swap(i, self.drawable - 1);
        self.cards.swap(self.drawable - 1, last);
        self.cards.pop();
        self.drawable -= 1;
        self.present.remove(c);
        c
    }

    pub fn move_to_back(&mut self, card: Card) -> bool {
        if !self.is_drawable(card) {
            return false;
        }
        let i = self.cards[..self.drawable]
            .iter()
            .position(|&c| c == card)
            .expect("drawable card is in the prefix");
        self.cards.swap(i, self.drawable - 1);
        self.drawable -= 1;
        self.back.insert(card);
        true
    }

    /// Makes every remaining card drawable again.
    pub fn reshuffle(&mut self) {
        for &c in &self.cards[self.drawable..] {
            self.back.remove(c);
        }
        self.drawable = self.cards.len();
    }

    pub fn drawable_cards(&self) -> &[Card] {
        &self.cards[..self.drawable]
    }
}
