//! Encoding the reserved set `D` of a min-order MtBE dealer using the
//! guesser's reasonable guesses in one epoch.

use crate::bits::{bits_for_big, BitReader, BitString, BitWriter, Bits, CardSet};
use crate::dealers::{MinOrderDealer, MinOrderRandomness, PermutationSource, Schedule};
use crate::engine::{Card, Dealer, Guesser, Turn};
use crate::error::{Error, Result};

use super::rank::{binomial, unrank_subset, SubsetRank};
use super::Gamma;

/// Bits of an indicator-1 codeword: indicator, `M`, `T`, `V`, `D1`.
pub fn unordered_length(m: usize, n: usize, k1: usize, ell: usize, alpha: usize) -> usize {
    1 + m + bits_for_big(&binomial(ell, alpha)) + alpha + bits_for_big(&binomial(n, k1 - alpha))
}

/// Bits of an indicator-0 codeword.
pub fn unordered_explicit_length(n: usize, k1: usize) -> usize {
    1 + bits_for_big(&binomial(n, k1))
}

/// Checks that the decoder can replay the game up to epoch `i` (1-based).
///
/// Every epoch up to `i` must move up to `ell` cards: with a smaller `u` the
/// cap could bind in the encoder's game but not in the decoder's.
pub fn check_codec_schedule(schedule: &Schedule, alpha: usize, i: usize) -> Result<()> {
    let d = schedule.epochs.len();
    if i == 0 || i > d {
        return Err(Error::ScheduleMismatch(format!("epoch {i} not in 1..={d}")));
    }
    let e = schedule.epochs[i - 1];
    if alpha > e.ell || alpha > schedule.k1 {
        return Err(Error::ScheduleMismatch(format!(
            "alpha={alpha} exceeds min(ell={}, k1={})",
            e.ell, schedule.k1
        )));
    }
    if let Some((j, e)) = schedule.epochs[..i].iter().enumerate().find(|(_, e)| e.u < e.ell) {
        return Err(Error::ScheduleMismatch(format!(
            "epoch {} has u={} < ell={}",
            j + 1,
            e.u,
            e.ell
        )));
    }
    Ok(())
}

/// What the encoder saw: the memory at `k1` cards left and the epoch's reasonable turns.
#[derive(Debug, Clone)]
pub struct EpochRecord {
    pub state: BitString,
    /// `(position in epoch, guess, correct)` for every reasonable guess.
    pub reasonable: Vec<(usize, Card, bool)>,
}

/// Plays the guesser against the min-order dealer through the end of epoch `i`.
pub fn record_epoch<P: PermutationSource + Clone>(
    gamma: &Gamma,
    rand: &MinOrderRandomness<P>,
    i: usize,
    schedule: &Schedule,
) -> Result<EpochRecord> {
    let n = schedule.n;
    let epoch = schedule.epochs[i - 1];
    let mut g = gamma.build(n)?;
    let mut dealer = MinOrderDealer::new(schedule.clone(), rand.clone())?;
    let mut state = if schedule.k1 == n { Some(g.save_state()) } else { None };
    let mut reasonable = Vec::new();
    for t in 1..=(n - epoch.last() + 1) {
        let turn = Turn::new(t, n);
        let d = dealer.commit(turn)?;
        let guess = g.guess(turn, &mut gamma.coins(t));
        if epoch.contains(turn.cards_left()) && dealer.is_drawable(guess) {
            reasonable.push((epoch.k - turn.cards_left(), guess, guess == d));
        }
        g.observe(turn, d);
        dealer.observe_guess(turn, guess);
        if turn.cards_left() == schedule.k1 + 1 {
            state = Some(g.save_state());
        }
    }
    Ok(EpochRecord {
        state: state.expect("k1 >= 1 cards are reached"),
        reasonable,
    })
}

pub fn encode_u<P: PermutationSource + Clone>(
    gamma: &Gamma,
    rand: &MinOrderRandomness<P>,
    alpha: usize,
    i: usize,
    schedule: &Schedule,
) -> Result<BitString> {
    check_codec_schedule(schedule, alpha, i)?;
    let n = schedule.n;
    let rec = record_epoch(gamma, rand, i, schedule)?;
    let d: Vec<Card> = rand.reserved.iter().collect();
    let mut out = BitWriter::new();
    if rec.reasonable.len() < alpha {
        out.push_bit(false);
        SubsetRank::of(&d, n)?.write(&mut out);
        return Ok(out.finish());
    }
    let first = &rec.reasonable[..alpha];
    out.push_bit(true);
    out.push_bits(&rec.state);
    let positions: Vec<Card> = first.iter().map(|r| r.0 as Card + 1).collect();
    SubsetRank::of(&positions, schedule.epochs[i - 1].ell)?.write(&mut out);
    for r in first {
        out.push_bit(r.2);
    }
    let d1: Vec<Card> = d
        .into_iter()
        .filter(|c| !first.iter().any(|r| r.1 == *c))
        .collect();
    SubsetRank::of(&d1, n)?.write(&mut out);
    Ok(out.finish())
}

/// Inverse of [`encode_u`]. Uses the permutations only; `D` is what is decoded.
pub fn decode_u<P: PermutationSource>(
    bits: &Bits,
    gamma: &Gamma,
    pi: &P,
    alpha: usize,
    i: usize,
    schedule: &Schedule,
) -> Result<Vec<Card>> {
    check_codec_schedule(schedule, alpha, i)?;
    let n = schedule.n;
    let k1 = schedule.k1;
    let target = schedule.epochs[i - 1];
    let mut input = BitReader::new(bits);
    if !input.read_bit()? {
        return SubsetRank::read(n, k1, &mut input)?.cards();
    }
    let mut g = gamma.build(n)?;
    let state = input.read_bits(g.declared_bits())?;
    let tagged: Vec<usize> = unrank_subset(&SubsetRank::read(target.ell, alpha, &mut input)?.rank, target.ell, alpha)?
        .into_iter()
        .map(|p| p as usize - 1)
        .collect();
    let mut correct = Vec::with_capacity(alpha);
    for _ in 0..alpha {
        correct.push(input.read_bit()?);
    }
    let d1 = SubsetRank::read(n, k1 - alpha, &mut input)?.cards()?;
    if alpha == 0 {
        return Ok(d1);
    }
    g.load_state(state)?;

    let mut pool = CardSet::empty(n);
    for &c in &d1 {
        pool.insert(c);
    }
    let mut back = CardSet::empty(n);
    let mut back_list: Vec<Card> = Vec::new();
    let mut current: Option<usize> = None;
    let mut d2 = Vec::with_capacity(alpha);
    for t in (n - k1 + 1)..=n {
        let turn = Turn::new(t, n);
        let left = turn.cards_left();
        let epoch = schedule.epoch_of(left);
        if epoch != current {
            for c in back_list.drain(..) {
                back.remove(c);
            }
            current = epoch;
        }
        let guess = g.guess(turn, &mut gamma.coins(t));
        let min_order = |pool: &CardSet, back: &CardSet| {
            pi.first_where(t, |c| pool.contains(c) && !back.contains(c))
                .ok_or_else(|| Error::MalformedCodeword(format!("no card left to draw at turn {t}")))
        };
        let draw;
        if epoch == Some(i - 1) {
            let pos = target.k - left;
            let tag = tagged.binary_search(&pos).ok();
            draw = match tag {
                Some(j) if correct[j] => guess,
                _ => min_order(&pool, &back)?,
            };
            pool.remove(draw);
            if tag.is_some() {
                d2.push(guess);
                back.insert(guess);
                back_list.push(guess);
                if d2.len() == alpha {
                    break;
                }
            }
        } else {
            draw = min_order(&pool, &back)?;
            pool.remove(draw);
            if let Some(j) = epoch {
                if back_list.len() < schedule.epochs[j].u && pool.contains(guess) && !back.contains(guess) {
                    back.insert(guess);
                    back_list.push(guess);
                }
            }
        }
        g.observe(turn, draw);
    }
    if d2.len() != alpha {
        return Err(Error::MalformedCodeword("epoch ended before all tagged turns".into()));
    }
    let mut out = d1;
    out.extend(d2);
    out.sort_unstable();
    if out.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::MalformedCodeword("decoded set repeats a card".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::chacha_from_key;
    use crate::guessers::GuesserSpec;

    fn toy() -> Schedule {
        Schedule::contiguous(16, 8, 2, 2, 2).unwrap()
    }

    fn round_trip(spec: GuesserSpec, schedule: &Schedule, alpha: usize, i: usize, seed: u64) -> (BitString, bool) {
        let gamma = Gamma::new(spec, seed, seed.wrapping_mul(31) + 7);
        let rand = MinOrderRandomness::sample(schedule.n, schedule.k1, &mut chacha_from_key(seed ^ 0xabc));
        let code = encode_u(&gamma, &rand, alpha, i, schedule).unwrap();
        let decoded = decode_u(&code, &gamma, &rand.pi, alpha, i, schedule).unwrap();
        let d: Vec<Card> = rand.reserved.iter().collect();
        assert_eq!(decoded, d, "seed {seed}");
        (code.clone(), code[0])
    }

    #[test]
    fn toy_round_trips_for_several_guessers() {
        let s = toy();
        let specs = [
            GuesserSpec::Subset { m: 2 },
            GuesserSpec::Perfect,
            GuesserSpec::Memoryless { card: 3 },
            GuesserSpec::Following { delta: 1.0 },
        ];
        for spec in specs {
            for i in 1..=2 {
                for alpha in 0..=2 {
                    let mut hit = false;
                    for seed in 0..150 {
                        let (code, ind) = round_trip(spec.clone(), &s, alpha, i, seed);
                        let m = spec.declared_bits_for(16).unwrap();
                        if ind {
                            hit = true;
                            assert_eq!(code.len(), unordered_length(m, 16, 8, 2, alpha));
                        } else {
                            assert_eq!(code.len(), unordered_explicit_length(16, 8));
                        }
                    }
                    if alpha == 0 {
                        assert!(hit);
                    }
                }
            }
        }
    }

    #[test]
    fn perfect_memory_reaches_the_compressed_branch() {
        let s = toy();
        let hits = (0..200).filter(|&seed| round_trip(GuesserSpec::Perfect, &s, 2, 2, seed).1).count();
        assert!(hits > 20, "{hits}");
    }

    #[test]
    fn schedule_checks() {
        let s = toy();
        assert!(matches!(check_codec_schedule(&s, 1, 3), Err(Error::ScheduleMismatch(_))));
        assert!(matches!(check_codec_schedule(&s, 3, 1), Err(Error::ScheduleMismatch(_))));
        let capped = Schedule::contiguous(16, 8, 2, 1, 2).unwrap();
        assert!(matches!(check_codec_schedule(&capped, 1, 1), Err(Error::ScheduleMismatch(_))));
        check_codec_schedule(&s, 2, 2).unwrap();
    }

    #[test]
    fn below_threshold_is_explicit() {
        let s = Schedule::contiguous(16, 8, 2, 2, 2).unwrap();
        // Card 16 can be reasonable at most once per epoch, so two are never reached.
        let (code, ind) = round_trip(GuesserSpec::Memoryless { card: 16 }, &s, 2, 1, 5);
        assert!(!ind);
        assert_eq!(code.len(), 1 + bits_for_big(&binomial(16, 8)));
    }
}
