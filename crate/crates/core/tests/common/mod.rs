//! Exact enumeration of dealer randomness for tiny decks.
//!
//! Every random choice a dealer makes goes through a shared [`Brancher`],
//! which replays one choice path per game and then steps to the next path in
//! depth-first order. Each path carries its exact probability.

#![allow(dead_code)]

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use card_guessing::bits::{BitString, Bits, CardSet};
use card_guessing::dealers::{
    DrawSource, EpochDealer, MinOrderDealer, MinOrderRandomness, PermutationSource, Schedule,
};
use card_guessing::engine::{play_into, Card, Coins, Guesser, MemoryCheck, Turn, TurnRecord};
use card_guessing::Result;

pub fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Default)]
pub struct Brancher {
    /// `(choice, number of options)` along the current path.
    path: Vec<(usize, usize)>,
    pos: usize,
    weight: BigRational,
}

impl Brancher {
    pub fn new() -> Self {
        Brancher {
            path: Vec::new(),
            pos: 0,
            weight: BigRational::one(),
        }
    }

    pub fn choose(&mut self, weights: &[BigRational]) -> usize {
        assert!(!weights.is_empty());
        let i = if self.pos < self.path.len() {
            assert_eq!(self.path[self.pos].1, weights.len(), "replay diverged");
            self.path[self.pos].0
        } else {
            self.path.push((0, weights.len()));
            0
        };
        self.pos += 1;
        self.weight *= &weights[i];
        i
    }

    /// Moves to the next path; false when all have been visited.
    fn advance(&mut self) -> bool {
        self.path.truncate(self.pos);
        self.pos = 0;
        self.weight = BigRational::one();
        while let Some((c, len)) = self.path.pop() {
            if c + 1 < len {
                self.path.push((c + 1, len));
                return true;
            }
        }
        false
    }
}

pub type Shared = Rc<RefCell<Brancher>>;

/// Runs `game` once per choice path and sums path weights by outcome.
pub fn enumerate<K: std::hash::Hash + Eq>(mut game: impl FnMut(&Shared) -> K) -> HashMap<K, BigRational> {
    let b: Shared = Rc::new(RefCell::new(Brancher::new()));
    let mut dist: HashMap<K, BigRational> = HashMap::new();
    loop {
        let key = game(&b);
        let w = b.borrow().weight.clone();
        *dist.entry(key).or_insert_with(BigRational::zero) += w;
        if !b.borrow_mut().advance() {
            break;
        }
    }
    dist
}

/// Uniform index choices, one branch per index.
pub struct BranchDraws(pub Shared);

impl DrawSource for BranchDraws {
    fn pick(&mut self, len: usize) -> usize {
        let w = vec![ratio(1, len); len];
        self.0.borrow_mut().choose(&w)
    }
}

pub fn all_permutations(n: usize) -> Vec<Vec<Card>> {
    fn rec(cur: &mut Vec<Card>, n: usize, out: &mut Vec<Vec<Card>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 1..=n as Card {
            if !cur.contains(&c) {
                cur.push(c);
                rec(cur, n, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<Card>> {
    fn rec(start: Card, n: usize, k: usize, cur: &mut Vec<Card>, out: &mut Vec<Vec<Card>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=n as Card {
            cur.push(c);
            rec(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Each turn's order ranges over all `n!` permutations. Only the first match
/// of the predicate matters, so the branches are the distinct first matches,
/// weighted by how many permutations produce each.
#[derive(Clone)]
pub struct BranchPermutations {
    pub perms: Rc<Vec<Vec<Card>>>,
    pub b: Shared,
}

impl PermutationSource for BranchPermutations {
    fn deck_size(&self) -> usize {
        self.perms[0].len()
    }

    fn first_where(&self, _t: usize, mut pred: impl FnMut(Card) -> bool) -> Option<Card> {
        let n = self.deck_size();
        let ok: Vec<bool> = (1..=n as Card).map(&mut pred).collect();
        let mut count = vec![0usize; n + 1];
        for p in self.perms.iter() {
            if let Some(&c) = p.iter().find(|&&c| ok[c as usize - 1]) {
                count[c as usize] += 1;
            }
        }
        let outcomes: Vec<Card> = (1..=n as Card).filter(|&c| count[c as usize] > 0).collect();
        if outcomes.is_empty() {
            return None;
        }
        let w: Vec<BigRational> = outcomes
            .iter()
            .map(|&c| ratio(count[c as usize], self.perms.len()))
            .collect();
        let i = self.b.borrow_mut().choose(&w);
        Some(outcomes[i])
    }
}

/// Guesses the smallest (or largest) card it has not yet seen.
#[derive(Debug, Clone)]
pub struct Extreme {
    pub unseen: CardSet,
    pub largest: bool,
}

impl Extreme {
    pub fn new(n: usize, largest: bool) -> Self {
        Extreme {
            unseen: CardSet::full(n),
            largest,
        }
    }
}

impl Guesser for Extreme {
    fn deck_size(&self) -> usize {
        self.unseen.capacity()
    }
    fn declared_bits(&self) -> usize {
        self.unseen.capacity()
    }
    fn guess(&mut self, _turn: Turn, _coins: &mut Coins) -> Card {
        let c = if self.largest {
            self.unseen.iter().last()
        } else {
            self.unseen.iter().next()
        };
        c.unwrap_or(1)
    }
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        self.unseen.remove(drawn);
    }
    fn save_state(&self) -> BitString {
        unimplemented!("not used by these tests")
    }
    fn load_state(&mut self, _bits: &Bits) -> Result<()> {
        unimplemented!("not used by these tests")
    }
}

pub type Transcript = Vec<(Card, Card, bool)>;

fn key(turns: &[TurnRecord]) -> Transcript {
    turns.iter().map(|r| (r.guess, r.draw, r.reasonable)).collect()
}

/// Exact transcript distribution against the direct MtBE dealer.
pub fn direct_distribution<G: Guesser>(schedule: &Schedule, make: impl Fn() -> G) -> HashMap<Transcript, BigRational> {
    enumerate(|b| {
        let mut g = make();
        let mut d = EpochDealer::new(schedule.clone(), BranchDraws(b.clone()));
        let mut turns = Vec::new();
        play_into(&mut g, &mut d, 0, MemoryCheck::Fast, &mut turns).unwrap();
        key(&turns)
    })
}

/// Exact transcript distribution against the min-order dealer, over every
/// reserved set and every per-turn order.
pub fn min_order_distribution<G: Guesser>(
    schedule: &Schedule,
    make: impl Fn() -> G,
) -> HashMap<Transcript, BigRational> {
    let n = schedule.n;
    let perms = Rc::new(all_permutations(n));
    let subsets = all_subsets(n, schedule.k1);
    let mut total: HashMap<Transcript, BigRational> = HashMap::new();
    for d in &subsets {
        let mut reserved = CardSet::empty(n);
        d.iter().for_each(|&c| {
            reserved.insert(c);
        });
        let part = enumerate(|b| {
            let pi = BranchPermutations {
                perms: perms.clone(),
                b: b.clone(),
            };
            let rand = MinOrderRandomness {
                pi,
                reserved: reserved.clone(),
            };
            let mut dealer = MinOrderDealer::new(schedule.clone(), rand).unwrap();
            let mut g = make();
            let mut turns = Vec::new();
            play_into(&mut g, &mut dealer, 0, MemoryCheck::Fast, &mut turns).unwrap();
            key(&turns)
        });
        let w = ratio(1, subsets.len());
        for (k, p) in part {
            *total.entry(k).or_insert_with(BigRational::zero) += p * &w;
        }
    }
    total
}

/// Checks the two distributions agree exactly and each sums to one.
pub fn same_distribution(a: &HashMap<Transcript, BigRational>, b: &HashMap<Transcript, BigRational>) -> bool {
    let one = BigRational::one();
    let sum = |m: &HashMap<Transcript, BigRational>| m.values().fold(BigRational::zero(), |s, v| s + v);
    sum(a) == one && sum(b) == one && a == b
}
