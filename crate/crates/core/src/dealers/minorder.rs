//! MtBE driven by per-turn precedence permutations and a reserved final set.

use std::collections::HashMap;

use rand::seq::index;
use rand::Rng;

use crate::bits::CardSet;
use crate::engine::{chacha_from_key, mix_words, Card, Dealer, Turn};
use crate::error::{Error, Result};

use super::schedule::{EpochTracker, Schedule};

/// The sequence of precedence orders `pi_1, ..., pi_n`.
pub trait PermutationSource {
    fn deck_size(&self) -> usize;
    /// The first card of `pi_t`'s order satisfying `pred`.
    fn first_where(&self, t: usize, pred: impl FnMut(Card) -> bool) -> Option<Card>;
}

/// Uniform permutations generated on demand from a key, one lazy Fisher-Yates per turn.
#[derive(Debug, Clone)]
pub struct SeededPermutations {
    n: usize,
    key: u64,
}

impl SeededPermutations {
    pub fn new(n: usize, key: u64) -> Self {
        SeededPermutations { n, key }
    }

    /// `pi_t` written out in full.
    pub fn order(&self, t: usize) -> Vec<Card> {
        let mut out = Vec::with_capacity(self.n);
        self.first_where(t, |c| {
            out.push(c);
            false
        });
        out
    }
}

impl PermutationSource for SeededPermutations {
    fn deck_size(&self) -> usize {
        self.n
    }

    fn first_where(&self, t: usize, mut pred: impl FnMut(Card) -> bool) -> Option<Card> {
        let mut rng = chacha_from_key(mix_words(&[self.key, t as u64]));
        // Positions not in the map still hold their own index.
        let mut moved: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.n {
            let j = rng.gen_range(i..self.n);
            let vi = *moved.get(&i).unwrap_or(&i);
            let vj = *moved.get(&j).unwrap_or(&j);
            moved.insert(j, vi);
            let card = vj as Card + 1;
            if pred(card) {
                return Some(card);
            }
        }
        None
    }
}

/// Explicitly listed orders; `orders[t - 1]` is `pi_t`.
#[derive(Debug, Clone)]
pub struct ExplicitPermutations {
    orders: Vec<Vec<Card>>,
}

impl ExplicitPermutations {
    pub fn new(orders: Vec<Vec<Card>>) -> Result<Self> {
        let n = orders.len();
        for o in &orders {
            if o.len() != n {
                return Err(Error::InvalidRandomness(format!(
                    "expected {n} permutations of 1..={n}"
                )));
            }
            super::simple::validate_arrangement(o)
                .map_err(|_| Error::InvalidRandomness("order is not a permutation".into()))?;
        }
        Ok(ExplicitPermutations { orders })
    }

    pub fn identity(n: usize) -> Self {
        ExplicitPermutations {
            orders: vec![(1..=n as Card).collect(); n],
        }
    }
}

impl PermutationSource for ExplicitPermutations {
    fn deck_size(&self) -> usize {
        self.orders.len()
    }

    fn first_where(&self, t: usize, mut pred: impl FnMut(Card) -> bool) -> Option<Card> {
        self.orders[t - 1].iter().copied().find(|&c| pred(c))
    }
}

/// The dealer's randomness: the orders and the set `D` kept for the last `k1` turns.
#[derive(Debug, Clone)]
pub struct MinOrderRandomness<P = SeededPermutations> {
    pub pi: P,
    pub reserved: CardSet,
}

impl MinOrderRandomness<SeededPermutations> {
    pub fn sample<R: Rng + ?Sized>(n: usize, k1: usize, rng: &mut R) -> Self {
        let pi = SeededPermutations::new(n, rng.gen());
        let mut reserved = CardSet::empty(n);
        for i in index::sample(rng, n, k1).iter() {
            reserved.insert(i as Card + 1);
        }
        MinOrderRandomness { pi, reserved }
    }
}

#[derive(Debug, Clone)]
pub struct MinOrderDealer<P = SeededPermutations> {
    schedule: Schedule,
    pi: P,
    reserved: CardSet,
    present: CardSet,
    back: CardSet,
    back_list: Vec<Card>,
    tracker: EpochTracker,
    pending: Card,
}

impl<P: PermutationSource> MinOrderDealer<P> {
    pub fn new(schedule: Schedule, rand: MinOrderRandomness<P>) -> Result<Self> {
        let n = schedule.n;
        if rand.reserved.len() != schedule.k1 || rand.reserved.capacity() != n {
            return Err(Error::InvalidRandomness(format!(
                "reserved set has {} cards, schedule needs k1={}",
                rand.reserved.len(),
                schedule.k1
            )));
        }
        if rand.pi.deck_size() != n {
            return Err(Error::InvalidRandomness(format!(
                "permutations are over {} cards, deck has {n}",
                rand.pi.deck_size()
            )));
        }
        Ok(MinOrderDealer {
            pi: rand.pi,
            reserved: rand.reserved,
            present: CardSet::full(n),
            back: CardSet::empty(n),
            back_list: Vec::new(),
            tracker: EpochTracker::new(),
            pending: 0,
            schedule,
        })
    }

    pub fn back_len(&self) -> usize {
        self.back_list.len()
    }
}

impl<P: PermutationSource> Dealer for MinOrderDealer<P> {
    fn deck_size(&self) -> usize {
        self.schedule.n
    }

    fn commit(&mut self, turn: Turn) -> Result<Card> {
        let left = turn.cards_left();
        if self.tracker.advance(&self.schedule, left) {
            for c in self.back_list.drain(..) {
                self.back.remove(c);
            }
        }
        let (present, back, reserved) = (&self.present, &self.back, &self.reserved);
        let pick = if left > self.schedule.k1 {
            self.pi.first_where(turn.t, |c| present.contains(c) && !reserved.contains(c))
        } else {
            self.pi.first_where(turn.t, |c| present.contains(c) && !back.contains(c))
        };
        self.pending = pick.ok_or_else(|| Error::ProtocolViolation("no drawable card left".into()))?;
        Ok(self.pending)
    }

    fn is_drawable(&self, card: Card) -> bool {
        self.present.contains(card) && !self.back.contains(card)
    }

    fn observe_guess(&mut self, _turn: Turn, guess: Card) {
        self.present.remove(self.pending);
        if let Some(i) = self.tracker.current() {
            if self.back_list.len() < self.schedule.epochs[i].u && self.is_drawable(guess) {
                self.back.insert(guess);
                self.back_list.push(guess);
            }
        }
    }

    fn epoch(&self) -> Option<usize> {
        self.tracker.current()
    }
}
