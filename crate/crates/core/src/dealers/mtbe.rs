//! Move-to-the-Back epochs drawn directly: uniform over `A_t \ B_t`.

use rand_chacha::ChaCha8Rng;

use crate::engine::{Card, Dealer, Turn};
use crate::error::{Error, Result};

use super::deck::{Deck, DrawSource};
use super::schedule::{EpochParams, EpochTracker, Schedule};

/// One `(k, ell, u)` epoch over a given set of `k` cards.
#[derive(Debug, Clone)]
pub struct MtbeEpoch<S = ChaCha8Rng> {
    params: EpochParams,
    deck: Deck,
    src: S,
    pending: Option<usize>,
    played: usize,
}

impl<S: DrawSource> MtbeEpoch<S> {
    pub fn new(params: EpochParams, n: usize, cards: &[Card], src: S) -> Result<Self> {
        if cards.len() != params.k {
            return Err(Error::param(format!(
                "epoch expects {} cards, got {}",
                params.k,
                cards.len()
            )));
        }
        Ok(MtbeEpoch {
            params,
            deck: Deck::from_cards(n, cards.iter().copied()),
            src,
            pending: None,
            played: 0,
        })
    }

    pub fn finished(&self) -> bool {
        self.played >= self.params.ell
    }

    pub fn draw(&mut self) -> Card {
        assert!(!self.finished(), "epoch already played {} turns", self.params.ell);
        let i = self.src.pick(self.deck.drawable_len());
        self.pending = Some(i);
        self.deck.card_at(i)
    }

    pub fn is_drawable(&self, card: Card) -> bool {
        self.deck.is_drawable(card)
    }

    /// Discards the drawn card, then moves `guess` back if it is still drawable and `|B| < u`.
    pub fn observe_guess(&mut self, guess: Card) {
        let i = self.pending.take().expect("draw before observe_guess");
        self.deck.remove_at(i);
        self.played += 1;
        if self.deck.back_len() < self.params.u {
            self.deck.move_to_back(guess);
        }
    }

    pub fn back_len(&self) -> usize {
        self.deck.back_len()
    }

    pub fn remaining(&self) -> usize {
        self.deck.len()
    }
}

/// Random draws outside epochs, MtBE draws inside them.
#[derive(Debug, Clone)]
pub struct EpochDealer<S = ChaCha8Rng> {
    schedule: Schedule,
    deck: Deck,
    src: S,
    tracker: EpochTracker,
    pending: usize,
}

impl<S: DrawSource> EpochDealer<S> {
    pub fn new(schedule: Schedule, src: S) -> Self {
        EpochDealer {
            deck: Deck::full(schedule.n),
            schedule,
            src,
            tracker: EpochTracker::new(),
            pending: 0,
        }
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn back_len(&self) -> usize {
        self.deck.back_len()
    }

    /// Cards that may be drawn right now.
    pub fn drawable_cards(&self) -> &[Card] {
        self.deck.drawable_cards()
    }
}

impl<S: DrawSource> Dealer for EpochDealer<S> {
    fn deck_size(&self) -> usize {
        self.schedule.n
    }
    #[inline]
    fn commit(&mut self, _turn: Turn) -> Result<Card> {
        if self.tracker.advance(&self.schedule, self.deck.len()) {
            self.deck.reshuffle();
        }
        self.pending = self.src.pick(self.deck.drawable_len());
        Ok(self.deck.card_at(self.pending))
    }
    #[inline]
    fn is_drawable(&self, card: Card) -> bool {
        self.deck.is_drawable(card)
    }
    #[inline]
    fn observe_guess(&mut self, _turn: Turn, guess: Card) {
        self.deck.remove_at(self.pending);
        if let Some(i) = self.tracker.current() {
            if self.deck.back_len() < self.schedule.epochs[i].u {
                self.deck.move_to_back(guess);
            }
        }
    }
    fn epoch(&self) -> Option<usize> {
        self.tracker.current()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::chacha_from_key;

    #[test]
    fn without_back_moves_an_epoch_is_a_plain_random_draw() {
        let p = EpochParams::new(6, 3, 0).unwrap();
        let mut e = MtbeEpoch::new(p, 10, &[1, 3, 5, 7, 9, 10], chacha_from_key(1)).unwrap();
        while !e.finished() {
            let d = e.draw();
            e.observe_guess(3);
            assert_eq!(e.back_len(), 0);
            assert!(d != 3 || !e.is_drawable(3));
        }
        assert_eq!(e.remaining(), 3);
    }

    #[test]
    fn second_guess_of_a_card_is_unreasonable() {
        let p = EpochParams::new(8, 4, 4).unwrap();
        let cards: Vec<Card> = (1..=8).collect();
        for seed in 0..50 {
            let mut e = MtbeEpoch::new(p, 8, &cards, chacha_from_key(seed)).unwrap();
            let d = e.draw();
            let g = if d == 5 { 6 } else { 5 };
            assert!(e.is_drawable(g));
            e.observe_guess(g);
            let d2 = e.draw();
            assert_ne!(d2, g);
            assert!(!e.is_drawable(g));
        }
    }

    #[test]
    fn back_set_never_exceeds_u() {
        let p = EpochParams::new(20, 10, 3).unwrap();
        let cards: Vec<Card> = (1..=20).collect();
        for seed in 0..10_000u64 {
            let mut e = MtbeEpoch::new(p, 20, &cards, chacha_from_key(seed)).unwrap();
            let mut g = 1 + (seed % 20) as Card;
            while !e.finished() {
                e.draw();
                e.observe_guess(g);
                g = g % 20 + 1;
                assert!(e.back_len() <= 3);
            }
        }
    }
}
