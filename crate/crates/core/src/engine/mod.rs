//! The turn loop between a guesser and a dealer.
//!
//! Per turn: the dealer commits `d_t`, the guesser emits `g_t`, the engine
//! records whether `g_t` was drawable at that moment, the guesser sees `d_t`,
//! and finally the dealer sees `g_t`.

mod rng;

use std::io::{self, Write};

pub use rng::{
    chacha_from_key, derive_streams, mix64, mix_words, stream_key, Coins, RandomnessStreams,
    StreamId,
};

use crate::bits::{BitString, Bits, CardSet};
use crate::error::{Error, Result};

pub type Card = u32;

/// Turn `t` (1-based) of a game with deck size `n`. Guessers get this for free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Turn {
    pub t: usize,
    pub n: usize,
}

impl Turn {
    pub fn new(t: usize, n: usize) -> Self {
        debug_assert!(t >= 1 && t <= n);
        Turn { t, n }
    }

    /// Cards still in the deck at the start of this turn.
    #[inline]
    pub fn cards_left(&self) -> usize {
        self.n - self.t + 1
    }
}

/// A sampled guesser strategy: long-lived randomness is fixed at construction,
/// everything else it remembers must fit in `save_state`.
pub trait Guesser {
    fn deck_size(&self) -> usize;

    /// Length of `save_state`, fixed for the whole game.
    fn declared_bits(&self) -> usize;

    fn guess(&mut self, turn: Turn, coins: &mut Coins) -> Card;

    fn observe(&mut self, turn: Turn, drawn: Card);

    fn save_state(&self) -> BitString;

    fn load_state(&mut self, bits: &Bits) -> Result<()>;
}

pub trait Dealer {
    fn deck_size(&self) -> usize;

    /// Chooses `d_t` from the history up to turn `t - 1`.
    fn commit(&mut self, turn: Turn) -> Result<Card>;

    /// Whether `card` could have been drawn this turn (checked before the reveal).
    fn is_drawable(&self, card: Card) -> bool;

    /// Reveals `g_t`; the committed card leaves the deck here.
    fn observe_guess(&mut self, turn: Turn, guess: Card);

    /// Index of the epoch the current turn belongs to, for epoch dealers.
    fn epoch(&self) -> Option<usize> {
        None
    }
}

impl<G: Guesser + ?Sized> Guesser for Box<G> {
    fn deck_size(&self) -> usize {
        (**self).deck_size()
    }
    fn declared_bits(&self) -> usize {
        (**self).declared_bits()
    }
    fn guess(&mut self, turn: Turn, coins: &mut Coins) -> Card {
        (**self).guess(turn, coins)
    }
    fn observe(&mut self, turn: Turn, drawn: Card) {
        (**self).observe(turn, drawn)
    }
    fn save_state(&self) -> BitString {
        (**self).save_state()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        (**self).load_state(bits)
    }
}

impl<D: Dealer + ?Sized> Dealer for Box<D> {
    fn deck_size(&self) -> usize {
        (**self).deck_size()
    }
    fn commit(&mut self, turn: Turn) -> Result<Card> {
        (**self).commit(turn)
    }
    fn is_drawable(&self, card: Card) -> bool {
        (**self).is_drawable(card)
    }
    fn observe_guess(&mut self, turn: Turn, guess: Card) {
        (**self).observe_guess(turn, guess)
    }
    fn epoch(&self) -> Option<usize> {
        (**self).epoch()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameConfig {
    pub n: usize,
    pub m: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TurnRecord {
    pub t: usize,
    pub guess: Card,
    pub draw: Card,
    pub reasonable: bool,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub config: GameConfig,
    pub turns: Vec<TurnRecord>,
    pub peak_state_bits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreSummary {
    pub correct: usize,
    pub reasonable: usize,
    pub correct_flags: Vec<bool>,
    pub reasonable_flags: Vec<bool>,
}

pub fn score(transcript: &Transcript) -> ScoreSummary {
    let correct_flags: Vec<bool> = transcript.turns.iter().map(|r| r.correct).collect();
    let reasonable_flags: Vec<bool> = transcript.turns.iter().map(|r| r.reasonable).collect();
    ScoreSummary {
        correct: correct_flags.iter().filter(|&&c| c).count(),
        reasonable: reasonable_flags.iter().filter(|&&r| r).count(),
        correct_flags,
        reasonable_flags,
    }
}

/// Receives every turn as it is played.
pub trait TurnSink {
    fn record(&mut self, rec: TurnRecord, epoch: Option<usize>);
}

impl TurnSink for Vec<TurnRecord> {
    fn record(&mut self, rec: TurnRecord, _epoch: Option<usize>) {
        self.push(rec);
    }
}

/// Counts only; what Monte Carlo runs use.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub correct: u64,
    pub reasonable: u64,
    pub epoch_reasonable: Vec<u64>,
    pub epoch_correct: Vec<u64>,
}

impl TurnSink for Tally {
    #[inline]
    fn record(&mut self, rec: TurnRecord, epoch: Option<usize>) {
        self.correct += u64::from(rec.correct);
        self.reasonable += u64::from(rec.reasonable);
        if let Some(i) = epoch {
            if self.epoch_reasonable.len() <= i {
                self.epoch_reasonable.resize(i + 1, 0);
                self.epoch_correct.resize(i + 1, 0);
            }
            self.epoch_reasonable[i] += u64::from(rec.reasonable);
            self.epoch_correct[i] += u64::from(rec.correct);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemoryCheck {
    /// Trust the declared layout.
    Fast,
    /// Serialize and measure the state after init and after every observe.
    Strict { budget: usize },
}

/// Plays one game into `sink`; returns the peak state size (declared size in fast mode).
pub fn play_into<G, D, S>(
    guesser: &mut G,
    dealer: &mut D,
    coins_key: u64,
    memory: MemoryCheck,
    sink: &mut S,
) -> Result<usize>
where
    G: Guesser + ?Sized,
    D: Dealer + ?Sized,
    S: TurnSink + ?Sized,
{
    let n = guesser.deck_size();
    if dealer.deck_size() != n {
        return Err(Error::param(format!(
            "guesser plays n={n} but dealer plays n={}",
            dealer.deck_size()
        )));
    }
    let measure = |g: &G, t: usize| -> Result<usize> {
        match memory {
            MemoryCheck::Fast => Ok(g.declared_bits()),
            MemoryCheck::Strict { budget } => {
                let bits = g.save_state().len();
                if bits > budget {
                    Err(Error::MemoryBudgetExceeded { bits, budget, turn: t })
                } else {
                    Ok(bits)
                }
            }
        }
    };
    let mut peak = measure(guesser, 0)?;
    let mut drawn = CardSet::empty(n);
    for t in 1..=n {
        let turn = Turn::new(t, n);
        let draw = dealer.commit(turn)?;
        if draw == 0 || draw as usize > n || drawn.contains(draw) {
            return Err(Error::ProtocolViolation(format!(
                "dealer drew card {draw} at turn {t}, which is not in the deck"
            )));
        }
        drawn.insert(draw);
        let epoch = dealer.epoch();
        let mut coins = Coins::new(coins_key, t);
        let guess = guesser.guess(turn, &mut coins);
        let reasonable = dealer.is_drawable(guess);
        guesser.observe(turn, draw);
        if let MemoryCheck::Strict { .. } = memory {
            peak = peak.max(measure(guesser, t)?);
        }
        dealer.observe_guess(turn, guess);
        let correct = guess == draw;
        if correct && !reasonable {
            return Err(Error::ProtocolViolation(format!(
                "turn {t}: dealer drew {draw} but reported it as not drawable"
            )));
        }
        sink.record(
            TurnRecord {
                t,
                guess,
                draw,
                reasonable,
                correct,
            },
            epoch,
        );
    }
    Ok(peak)
}

/// Plays one full game and records its transcript.
pub fn play_game<G, D>(
    guesser: &mut G,
    dealer: &mut D,
    config: GameConfig,
    streams: &RandomnessStreams,
    strict_memory: bool,
) -> Result<Transcript>
where
    G: Guesser + ?Sized,
    D: Dealer + ?Sized,
{
    let memory = if strict_memory {
        MemoryCheck::Strict { budget: config.m }
    } else {
        MemoryCheck::Fast
    };
    let mut turns = Vec::with_capacity(config.n);
    let peak_state_bits =
        play_into(guesser, dealer, streams.guesser_on_the_fly, memory, &mut turns)?;
    Ok(Transcript {
        config,
        turns,
        peak_state_bits,
    })
}

/// True iff the guesser's serialized state stays within `m` bits after init and
/// after every observe, over one game against a shuffled deck.
pub fn assert_memory_bound<G: Guesser + ?Sized>(guesser: &mut G, m: usize, seed: u64) -> bool {
    let n = guesser.deck_size();
    let streams = derive_streams(seed, 0);
    let mut dealer = crate::dealers::ShuffleDealer::new(n, streams.dealer.clone());
    let mut sink = Tally::default();
    play_into(
        guesser,
        &mut dealer,
        streams.guesser_on_the_fly,
        MemoryCheck::Strict { budget: m },
        &mut sink,
    )
    .is_ok()
}

pub const TRANSCRIPT_CSV_HEADER: &str = "trial,t,guess,draw,reasonable,correct";

pub fn write_transcript_csv<W: Write>(out: &mut W, trial: u64, transcript: &Transcript) -> io::Result<()> {
    for r in &transcript.turns {
        writeln!(
            out,
            "{trial},{},{},{},{},{}",
            r.t,
            r.guess,
            r.draw,
            u8::from(r.reasonable),
            u8::from(r.correct)
        )?;
    }
    Ok(())
}
