//! Guesser strategies and their registry.

mod amplified;
mod basic;
mod combined;
mod following;
mod power_sum;
mod randomized;
mod shrink;

pub use amplified::{function_count, AmplifiedSubsets};
pub use basic::{Memoryless, PerfectMemory, SubsetGuesser};
pub use combined::CombinedGuesser;
pub use following::{range_sizes, FollowingSubsets, RangeAccumulator};
pub use power_sum::{recover_missing, smallest_prime_above, PowerSumGuesser, PowerSumState};
pub use randomized::{bucket_layout_bits, target_bucket, RandomizedSubsets};
pub use shrink::{counter_bits, nominal_domain, shrunk_domain, ShrunkGuesser};

use rand::Rng;

use crate::bits::{BitString, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};

pub const GUESSER_KINDS: [&str; 8] = [
    "memoryless",
    "perfect",
    "subset",
    "power_sum",
    "combined",
    "following",
    "randomized",
    "amplified",
];

#[derive(Debug, Clone, PartialEq)]
pub enum GuesserSpec {
    Memoryless { card: Card },
    Perfect,
    Subset { m: usize },
    PowerSum { k: usize },
    Combined { m: usize },
    Following { delta: f64 },
    Randomized,
    /// `k = None` means `2 log2 n`.
    Amplified { delta: f64, k: Option<usize> },
    Shrunk { inner: Box<GuesserSpec>, m: usize },
}

/// Optional knobs for building a spec from a registry name.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GuesserParams {
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub delta: Option<f64>,
    pub card: Option<Card>,
}

/// Wraps `spec` so it only plays the cards `1..=2^b`, `2^b <= 2^floor(sqrt m)`.
pub fn shrink_domain(spec: GuesserSpec, m: usize) -> GuesserSpec {
    GuesserSpec::Shrunk {
        inner: Box::new(spec),
        m,
    }
}

impl GuesserSpec {
    pub fn from_registry(name: &str, p: GuesserParams) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| Error::param(format!("guesser `{name}` needs --{what}")))
        };
        Ok(match name {
            "memoryless" => GuesserSpec::Memoryless { card: p.card.unwrap_or(1) },
            "perfect" => GuesserSpec::Perfect,
            "subset" => GuesserSpec::Subset { m: need(p.m, "m")? },
            "power_sum" => GuesserSpec::PowerSum { k: need(p.k, "k")? },
            "combined" => GuesserSpec::Combined { m: need(p.m, "m")? },
            "following" => GuesserSpec::Following { delta: p.delta.unwrap_or(1.0) },
            "randomized" => GuesserSpec::Randomized,
            "amplified" => GuesserSpec::Amplified {
                delta: p.delta.unwrap_or(0.125),
                k: p.k,
            },
            other if other.starts_with("shrunk-") => {
                let inner = Self::from_registry(&other["shrunk-".len()..], p)?;
                shrink_domain(inner, need(p.m, "m")?)
            }
            other => {
                return Err(Error::UnknownKind {
                    what: "guesser",
                    name: other.to_string(),
                })
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            GuesserSpec::Memoryless { .. } => "memoryless".into(),
            GuesserSpec::Perfect => "perfect".into(),
            GuesserSpec::Subset { .. } => "subset".into(),
            GuesserSpec::PowerSum { .. } => "power_sum".into(),
            GuesserSpec::Combined { .. } => "combined".into(),
            GuesserSpec::Following { .. } => "following".into(),
            GuesserSpec::Randomized => "randomized".into(),
            GuesserSpec::Amplified { .. } => "amplified".into(),
            GuesserSpec::Shrunk { inner, .. } => format!("shrunk-{}", inner.name()),
        }
    }

    pub fn delta(&self) -> Option<f64> {
        match self {
            GuesserSpec::Following { delta } | GuesserSpec::Amplified { delta, .. } => Some(*delta),
            GuesserSpec::Shrunk { inner, .. } => inner.delta(),
            _ => None,
        }
    }

    /// No long-lived and no read-once randomness.
    pub fn is_deterministic(&self) -> bool {
        match self {
            GuesserSpec::Memoryless { .. } | GuesserSpec::Following { .. } => true,
            GuesserSpec::Shrunk { inner, .. } => inner.is_deterministic(),
            _ => false,
        }
    }

    /// Whether guesses depend on the turn index (free to the top-level guesser,
    /// but charged to a shrunken-domain wrapper).
    pub fn uses_turn_index(&self) -> bool {
        matches!(
            self,
            GuesserSpec::PowerSum { .. }
                | GuesserSpec::Combined { .. }
                | GuesserSpec::Randomized
                | GuesserSpec::Amplified { .. }
        )
    }

    fn amplified_k(k: Option<usize>, n: usize) -> usize {
        k.unwrap_or(2 * n.trailing_zeros() as usize)
    }

    /// State size at deck size `n`, without sampling anything.
    pub fn declared_bits_for(&self, n: usize) -> Result<usize> {
        Ok(match self {
            GuesserSpec::Memoryless { card } => {
                Memoryless::new(n, *card)?;
                0
            }
            GuesserSpec::Perfect => n,
            GuesserSpec::Subset { m } => {
                if *m == 0 || *m > n {
                    return Err(Error::param(format!("subset size {m} not in 1..={n}")));
                }
                *m
            }
            GuesserSpec::PowerSum { k } => PowerSumGuesser::layout_bits(n, *k),
            GuesserSpec::Combined { m } => {
                let (size, k) = CombinedGuesser::split(n, *m)?;
                size + PowerSumGuesser::layout_bits(n, k)
            }
            GuesserSpec::Following { delta } => FollowingSubsets::layout_bits(n, *delta)?,
            GuesserSpec::Randomized => {
                crate::hashing::FieldSpec::for_deck(n)?;
                RandomizedSubsets::layout_bits(n)
            }
            GuesserSpec::Amplified { delta, k } => {
                crate::hashing::FieldSpec::for_deck(n)?;
                if Self::amplified_k(*k, n) < 2 * n.trailing_zeros() as usize || !(*delta > 0.0 && *delta < 1.0) {
                    return Err(Error::param("amplified parameters out of range"));
                }
                AmplifiedSubsets::layout_bits(n, *delta)
            }
            GuesserSpec::Shrunk { inner, m } => {
                let d = shrunk_domain(inner, *m, n)?;
                inner.declared_bits_for(d)? + counter_bits(inner, d)
            }
        })
    }

    /// Samples the strategy; long-lived randomness comes from `rng`.
    pub fn build<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<AnyGuesser> {
        if n == 0 {
            return Err(Error::param("deck size must be at least 1"));
        }
        Ok(match self {
            GuesserSpec::Memoryless { card } => AnyGuesser::Memoryless(Memoryless::new(n, *card)?),
            GuesserSpec::Perfect => AnyGuesser::Perfect(PerfectMemory::new(n)),
            GuesserSpec::Subset { m } => AnyGuesser::Subset(SubsetGuesser::sample(n, *m, rng)?),
            GuesserSpec::PowerSum { k } => AnyGuesser::PowerSum(PowerSumGuesser::new(n, *k)?),
            GuesserSpec::Combined { m } => AnyGuesser::Combined(CombinedGuesser::sample(n, *m, rng)?),
            GuesserSpec::Following { delta } => AnyGuesser::Following(FollowingSubsets::new(n, *delta)?),
            GuesserSpec::Randomized => AnyGuesser::Randomized(RandomizedSubsets::sample(n, rng)?),
            GuesserSpec::Amplified { delta, k } => AnyGuesser::Amplified(AmplifiedSubsets::sample(
                n,
                *delta,
                Self::amplified_k(*k, n),
                rng,
            )?),
            GuesserSpec::Shrunk { inner, m } => {
                let d = shrunk_domain(inner, *m, n)?;
                let built = inner.build(d, rng)?;
                AnyGuesser::Shrunk(ShrunkGuesser::new(n, d, built, counter_bits(inner, d)))
            }
        })
    }
}

/// Any built guesser; static dispatch for the hot loop.
#[derive(Debug, Clone)]
pub enum AnyGuesser {
    Memoryless(Memoryless),
    Perfect(PerfectMemory),
    Subset(SubsetGuesser),
    PowerSum(PowerSumGuesser),
    Combined(CombinedGuesser),
    Following(FollowingSubsets),
    Randomized(RandomizedSubsets),
    Amplified(AmplifiedSubsets),
    Shrunk(ShrunkGuesser),
}

macro_rules! dispatch {
    ($self:expr, $g:ident => $body:expr) => {
        match $self {
            AnyGuesser::Memoryless($g) => $body,
            AnyGuesser::Perfect($g) => $body,
            AnyGuesser::Subset($g) => $body,
            AnyGuesser::PowerSum($g) => $body,
            AnyGuesser::Combined($g) => $body,
            AnyGuesser::Following($g) => $body,
            AnyGuesser::Randomized($g) => $body,
            AnyGuesser::Amplified($g) => $body,
            AnyGuesser::Shrunk($g) => $body,
        }
    };
}

impl AnyGuesser {
    pub fn as_amplified(&self) -> Option<&AmplifiedSubsets> {
        match self {
            AnyGuesser::Amplified(g) => Some(g),
            _ => None,
        }
    }
}

impl Guesser for AnyGuesser {
    fn deck_size(&self) -> usize {
        dispatch!(self, g => g.deck_size())
    }
    fn declared_bits(&self) -> usize {
        dispatch!(self, g => g.declared_bits())
    }
    #[inline]
    fn guess(&mut self, turn: Turn, coins: &mut Coins) -> Card {
        dispatch!(self, g => g.guess(turn, coins))
    }
    #[inline]
    fn observe(&mut self, turn: Turn, drawn: Card) {
        dispatch!(self, g => g.observe(turn, drawn))
    }
    fn save_state(&self) -> BitString {
        dispatch!(self, g => g.save_state())
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        dispatch!(self, g => g.load_state(bits))
    }
}
