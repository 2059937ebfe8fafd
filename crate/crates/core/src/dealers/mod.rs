//! Dealer strategies and their registry.

mod deck;
mod minorder;
mod mtbe;
mod schedule;
mod simple;

pub use deck::{Deck, DrawSource};
pub use minorder::{
    ExplicitPermutations, MinOrderDealer, MinOrderRandomness, PermutationSource, SeededPermutations,
};
pub use mtbe::{EpochDealer, MtbeEpoch};
pub use schedule::{mtbe_params, universal_params, EpochParams, MtbeSchedule, Schedule, UniversalSchedule};
pub use simple::{
    adversarial_arrangement_for, bit_reversal_arrangement, identity_arrangement, load_arrangements,
    parse_arrangements, reverse_arrangement, validate_arrangement, ShuffleDealer, StaticDealer,
};

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use crate::engine::{Card, Dealer, Turn};
use crate::error::{Error, Result};
use crate::guessers::GuesserSpec;

pub const DEALER_KINDS: [&str; 6] = [
    "shuffle",
    "static",
    "static-adversarial",
    "mtbe",
    "mtbe-minorder",
    "universal",
];

#[derive(Debug, Clone, PartialEq)]
pub enum StaticOrder {
    Identity,
    Reverse,
    BitReversal,
    /// A fresh uniform arrangement per trial.
    Random,
    /// Trial `i` uses arrangement `i mod len`.
    Explicit(Vec<Vec<Card>>),
}

impl StaticOrder {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "identity" => StaticOrder::Identity,
            "reverse" => StaticOrder::Reverse,
            "bit-reversal" => StaticOrder::BitReversal,
            "random" => StaticOrder::Random,
            other => {
                return Err(Error::UnknownKind {
                    what: "static order",
                    name: other.to_string(),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            StaticOrder::Identity => "identity",
            StaticOrder::Reverse => "reverse",
            StaticOrder::BitReversal => "bit-reversal",
            StaticOrder::Random => "random",
            StaticOrder::Explicit(_) => "file",
        }
    }

    pub fn arrangement(&self, n: usize, trial: u64, rng: &mut ChaCha8Rng) -> Result<Vec<Card>> {
        match self {
            StaticOrder::Identity => Ok(identity_arrangement(n)),
            StaticOrder::Reverse => Ok(reverse_arrangement(n)),
            StaticOrder::BitReversal => bit_reversal_arrangement(n),
            StaticOrder::Random => {
                let mut a = identity_arrangement(n);
                a.shuffle(rng);
                Ok(a)
            }
            StaticOrder::Explicit(list) => {
                let a = list[(trial % list.len() as u64) as usize].clone();
                if a.len() != n {
                    return Err(Error::InvalidArrangement { n });
                }
                Ok(a)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DealerSpec {
    Shuffle,
    Static(StaticOrder),
    /// The arrangement that holds the (deterministic) guesser to one correct guess.
    StaticAdversarial,
    Mtbe { m: usize },
    MtbeMinOrder { m: usize },
    Universal,
    /// A hand-built epoch schedule, drawn directly.
    Epochs(Schedule),
    /// A hand-built epoch schedule, drawn by min-order.
    EpochsMinOrder(Schedule),
}

impl DealerSpec {
    /// `m` is needed by the MtBE kinds; `order` by `static`.
    pub fn from_registry(name: &str, m: Option<usize>, order: Option<StaticOrder>) -> Result<Self> {
        let need_m = || m.ok_or_else(|| Error::param(format!("dealer `{name}` needs --m")));
        Ok(match name {
            "shuffle" => DealerSpec::Shuffle,
            "static" => DealerSpec::Static(order.unwrap_or(StaticOrder::Random)),
            "static-adversarial" => DealerSpec::StaticAdversarial,
            "mtbe" => DealerSpec::Mtbe { m: need_m()? },
            "mtbe-minorder" => DealerSpec::MtbeMinOrder { m: need_m()? },
            "universal" => DealerSpec::Universal,
            other => {
                return Err(Error::UnknownKind {
                    what: "dealer",
                    name: other.to_string(),
                })
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            DealerSpec::Shuffle => "shuffle".into(),
            DealerSpec::Static(o) => format!("static-{}", o.name()),
            DealerSpec::StaticAdversarial => "static-adversarial".into(),
            DealerSpec::Mtbe { .. } => "mtbe".into(),
            DealerSpec::MtbeMinOrder { .. } => "mtbe-minorder".into(),
            DealerSpec::Universal => "universal".into(),
            DealerSpec::Epochs(_) => "epochs".into(),
            DealerSpec::EpochsMinOrder(_) => "epochs-minorder".into(),
        }
    }

    /// The epoch schedule this dealer follows, if it has one.
    pub fn schedule(&self, n: usize) -> Result<Option<Schedule>> {
        Ok(match self {
            DealerSpec::Mtbe { m } | DealerSpec::MtbeMinOrder { m } => Some(mtbe_params(n, *m)?.to_schedule()?),
            DealerSpec::Universal => Some(universal_params(n).to_schedule()?),
            DealerSpec::Epochs(s) | DealerSpec::EpochsMinOrder(s) => {
                if s.n != n {
                    return Err(Error::param(format!("schedule is for n={}, deck has {n}", s.n)));
                }
                Some(s.clone())
            }
            _ => None,
        })
    }

    /// Builds the dealer for one trial; all dealer randomness comes from `rng`.
    pub fn build(&self, n: usize, guesser: &GuesserSpec, trial: u64, mut rng: ChaCha8Rng) -> Result<AnyDealer> {
        if n == 0 {
            return Err(Error::param("deck size must be at least 1"));
        }
        Ok(match self {
            DealerSpec::Shuffle => AnyDealer::Shuffle(ShuffleDealer::new(n, rng)),
            DealerSpec::Static(order) => AnyDealer::Static(StaticDealer::new(order.arrangement(n, trial, &mut rng)?)?),
            DealerSpec::StaticAdversarial => {
                AnyDealer::Static(StaticDealer::new(adversarial_arrangement_for(guesser, n)?)?)
            }
            DealerSpec::Mtbe { .. } | DealerSpec::Universal | DealerSpec::Epochs(_) => {
                let s = self.schedule(n)?.expect("epoch dealer has a schedule");
                AnyDealer::Epochs(EpochDealer::new(s, rng))
            }
            DealerSpec::MtbeMinOrder { .. } | DealerSpec::EpochsMinOrder(_) => {
                let s = self.schedule(n)?.expect("epoch dealer has a schedule");
                let rand = MinOrderRandomness::sample(n, s.k1, &mut rng);
                AnyDealer::MinOrder(MinOrderDealer::new(s, rand)?)
            }
        })
    }
}

/// Any built dealer; static dispatch for the hot loop.
#[derive(Debug, Clone)]
pub enum AnyDealer {
    Shuffle(ShuffleDealer),
    Static(StaticDealer),
    Epochs(EpochDealer),
    MinOrder(MinOrderDealer),
}

macro_rules! dispatch {
    ($self:expr, $d:ident => $body:expr) => {
        match $self {
            AnyDealer::Shuffle($d) => $body,
            AnyDealer::Static($d) => $body,
            AnyDealer::Epochs($d) => $body,
            AnyDealer::MinOrder($d) => $body,
        }
    };
}

impl Dealer for AnyDealer {
    fn deck_size(&self) -> usize {
        dispatch!(self, d => d.deck_size())
    }
    #[inline]
    fn commit(&mut self, turn: Turn) -> Result<Card> {
        dispatch!(self, d => d.commit(turn))
    }
    #[inline]
    fn is_drawable(&self, card: Card) -> bool {
        dispatch!(self, d => d.is_drawable(card))
    }
    #[inline]
    fn observe_guess(&mut self, turn: Turn, guess: Card) {
        dispatch!(self, d => d.observe_guess(turn, guess))
    }
    fn epoch(&self) -> Option<usize> {
        dispatch!(self, d => d.epoch())
    }
}
