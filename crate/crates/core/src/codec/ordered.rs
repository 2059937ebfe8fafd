//! Encoding the last `k` cards of a static arrangement using the guesser's
//! correct guesses.

use crate::bits::{bits_for_big, BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Guesser, Turn};
use crate::error::{Error, Result};

use super::rank::{binomial, falling, unrank_subset, OrderedRank, SubsetRank};
use super::Gamma;

/// Bits of an indicator-1 codeword.
pub fn ordered_length(m: usize, n: usize, k: usize, alpha: usize) -> usize {
    1 + m + bits_for_big(&binomial(k, alpha)) + bits_for_big(&falling(n, k - alpha))
}

/// Bits of an indicator-0 codeword.
pub fn ordered_explicit_length(n: usize, k: usize) -> usize {
    1 + bits_for_big(&falling(n, k))
}

fn check(gamma: &Gamma, n: usize, k: usize, alpha: usize) -> Result<()> {
    if k > n || alpha > k {
        return Err(Error::param(format!("need alpha <= k <= n, got alpha={alpha}, k={k}, n={n}")));
    }
    gamma.spec.declared_bits_for(n).map(|_| ())
}

/// Correct-guess positions in the last `k` turns, and the memory state before them.
fn simulate(gamma: &Gamma, prefix: &[Card], suffix: &[Card]) -> Result<(BitString, Vec<usize>)> {
    let n = prefix.len() + suffix.len();
    let mut g = gamma.build(n)?;
    for (i, &c) in prefix.iter().enumerate() {
        let turn = Turn::new(i + 1, n);
        g.guess(turn, &mut gamma.coins(turn.t));
        g.observe(turn, c);
    }
    let state = g.save_state();
    let mut hits = Vec::new();
    for (j, &c) in suffix.iter().enumerate() {
        let turn = Turn::new(prefix.len() + j + 1, n);
        if g.guess(turn, &mut gamma.coins(turn.t)) == c {
            hits.push(j);
        }
        g.observe(turn, c);
    }
    Ok((state, hits))
}

/// Encodes the ordered suffix `b`, played after `prefix` (an arrangement of the other cards).
pub fn encode_o(b: &[Card], prefix: &[Card], gamma: &Gamma, alpha: usize) -> Result<BitString> {
    let n = prefix.len() + b.len();
    let k = b.len();
    check(gamma, n, k, alpha)?;
    let mut all = prefix.to_vec();
    all.extend_from_slice(b);
    crate::dealers::validate_arrangement(&all)?;

    let (state, hits) = simulate(gamma, prefix, b)?;
    let mut out = BitWriter::new();
    if hits.len() < alpha {
        out.push_bit(false);
        OrderedRank::of(b, n)?.write(&mut out);
        return Ok(out.finish());
    }
    let t = &hits[..alpha];
    out.push_bit(true);
    out.push_bits(&state);
    let positions: Vec<Card> = t.iter().map(|&j| j as Card + 1).collect();
    SubsetRank::of(&positions, k)?.write(&mut out);
    let rest: Vec<Card> = b
        .iter()
        .enumerate()
        .filter(|(j, _)| t.binary_search(j).is_err())
        .map(|(_, &c)| c)
        .collect();
    OrderedRank::of(&rest, n)?.write(&mut out);
    Ok(out.finish())
}

/// Inverse of [`encode_o`]; needs only `gamma`, not the prefix.
pub fn decode_o(bits: &Bits, gamma: &Gamma, alpha: usize, k: usize, n: usize) -> Result<Vec<Card>> {
    check(gamma, n, k, alpha)?;
    let mut input = BitReader::new(bits);
    if !input.read_bit()? {
        return OrderedRank::read(n, k, &mut input)?.cards();
    }
    let mut g = gamma.build(n)?;
    let state = input.read_bits(g.declared_bits())?;
    let tagged: Vec<usize> = unrank_subset(&SubsetRank::read(k, alpha, &mut input)?.rank, k, alpha)?
        .into_iter()
        .map(|p| p as usize - 1)
        .collect();
    let rest = OrderedRank::read(n, k - alpha, &mut input)?.cards()?;
    g.load_state(state)?;

    let mut rest = rest.into_iter();
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let turn = Turn::new(n - k + j + 1, n);
        let guess = g.guess(turn, &mut gamma.coins(turn.t));
        let d = if tagged.binary_search(&j).is_ok() {
            guess
        } else {
            rest.next().ok_or_else(|| Error::MalformedCodeword("ran out of suffix cards".into()))?
        };
        if out.contains(&d) {
            return Err(Error::MalformedCodeword(format!("card {d} decoded twice")));
        }
        out.push(d);
        g.observe(turn, d);
    }
    Ok(out)
}

/// The prefix arrangement maximizing correct guesses on the suffix, by exhaustive search.
/// Only for tiny decks: it tries all `(n-k)!` prefixes.
pub fn best_prefix(b: &[Card], n: usize, gamma: &Gamma) -> Result<Vec<Card>> {
    if n > 8 {
        return Err(Error::param(format!("best-prefix search is limited to n <= 8, got {n}")));
    }
    let mut others: Vec<Card> = (1..=n as Card).filter(|c| !b.contains(c)).collect();
    let mut best = (usize::MAX, others.clone());
    let mut found = false;
    permute(&mut others, 0, &mut |p| {
        let (_, hits) = simulate(gamma, p, b)?;
        if !found || hits.len() > best.0 {
            best = (hits.len(), p.to_vec());
            found = true;
        }
        Ok(())
    })?;
    Ok(best.1)
}

fn permute(a: &mut Vec<Card>, i: usize, f: &mut impl FnMut(&[Card]) -> Result<()>) -> Result<()> {
    if i == a.len() {
        return f(a);
    }
    for j in i..a.len() {
        a.swap(i, j);
        permute(a, i + 1, f)?;
        a.swap(i, j);
    }
    Ok(())
}
