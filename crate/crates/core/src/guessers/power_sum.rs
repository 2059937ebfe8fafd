//! Missing-card recovery from power sums modulo a prime.

use rand::Rng;

use crate::bits::{bits_for, BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};

use super::basic::check_state_len;

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_above(n: u64) -> u64 {
    (n + 1..).find(|&x| is_prime(x)).expect("primes are unbounded")
}

#[inline]
fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, q: u64) -> u64 {
    pow_mod(a, q - 2, q)
}

/// `S_p = sum of x^p over undrawn x`, for `p = 1..=k`, modulo `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumState {
    pub n: usize,
    pub q: u64,
    pub sums: Vec<u64>,
}

impl PowerSumState {
    /// Sums over the full deck.
    pub fn new(n: usize, k: usize) -> Self {
        let q = smallest_prime_above(n as u64);
        let mut sums = vec![0u64; k];
        for x in 1..=n as u64 {
            let mut pw = 1u64;
            for s in sums.iter_mut() {
                pw = mul_mod(pw, x, q);
                *s = (*s + pw) % q;
            }
        }
        PowerSumState { n, q, sums }
    }

    pub fn k(&self) -> usize {
        self.sums.len()
    }

    pub fn bits_per_sum(&self) -> usize {
        bits_for(self.q)
    }

    #[inline]
    pub fn remove(&mut self, card: Card) {
        let q = self.q;
        let x = card as u64 % q;
        let mut pw = 1u64;
        for s in self.sums.iter_mut() {
            pw = mul_mod(pw, x, q);
            *s = (*s + q - pw) % q;
        }
    }

    /// Elementary symmetric polynomials `e_0..=e_c` from `S_1..=S_c` (Newton's identities).
    pub fn elementary(&self, c: usize) -> Vec<u64> {
        let q = self.q;
        let mut e = vec![0u64; c + 1];
        e[0] = 1;
        for j in 1..=c {
            let mut acc = 0u64;
            for i in 1..=j {
                let term = mul_mod(e[j - i], self.sums[i - 1], q);
                if i % 2 == 1 {
                    acc = (acc + term) % q;
                } else {
                    acc = (acc + q - term) % q;
                }
            }
            e[j] = mul_mod(acc, inv_mod(j as u64 % q, q), q);
        }
        e
    }
}

/// The `c` undrawn cards, when exactly `c <= k` remain.
pub fn recover_missing(state: &PowerSumState, c: usize) -> Result<Vec<Card>> {
    if c > state.k() {
        return Err(Error::param(format!(
            "cannot recover {c} cards from {} power sums",
            state.k()
        )));
    }
    let q = state.q;
    let e = state.elementary(c);
    // prod (x - r) = sum_j (-1)^j e_j x^(c-j)
    let coeffs: Vec<u64> = (0..=c)
        .map(|j| if j % 2 == 0 { e[j] } else { (q - e[j]) % q })
        .collect();
    let roots: Vec<Card> = (1..=state.n as u64)
        .filter(|&x| coeffs.iter().fold(0u64, |acc, &a| (mul_mod(acc, x, q) + a) % q) == 0)
        .map(|x| x as Card)
        .collect();
    if roots.len() != c {
        return Err(Error::RecoveryInconsistent {
            expected: c,
            found: roots.len(),
        });
    }
    Ok(roots)
}

/// Keeps `k` power sums; in the last `k` turns it knows the remaining deck.
#[derive(Debug, Clone)]
pub struct PowerSumGuesser {
    state: PowerSumState,
}

impl PowerSumGuesser {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::param(format!("power-sum count {k} not in 1..={n}")));
        }
        Ok(PowerSumGuesser {
            state: PowerSumState::new(n, k),
        })
    }

    pub fn state(&self) -> &PowerSumState {
        &self.state
    }

    pub fn layout_bits(n: usize, k: usize) -> usize {
        k * bits_for(smallest_prime_above(n as u64))
    }

    /// A uniform remaining card, once few enough remain.
    pub(crate) fn pick(&self, turn: Turn, coins: &mut Coins) -> Option<Card> {
        let c = turn.cards_left();
        if c > self.state.k() {
            return None;
        }
        let cards = recover_missing(&self.state, c).ok()?;
        Some(cards[coins.gen_range(0..cards.len())])
    }

    #[inline]
    pub(crate) fn mark(&mut self, drawn: Card) {
        self.state.remove(drawn);
    }

    pub(crate) fn write(&self, w: &mut BitWriter) {
        let width = self.state.bits_per_sum();
        for &s in &self.state.sums {
            w.push_uint(s, width);
        }
    }

    pub(crate) fn read(&mut self, r: &mut BitReader<'_>) -> Result<()> {
        let width = self.state.bits_per_sum();
        for s in self.state.sums.iter_mut() {
            *s = r.read_uint(width)?;
            if *s >= self.state.q {
                return Err(Error::param(format!("power sum {s} not below q={}", self.state.q)));
            }
        }
        Ok(())
    }
}

impl Guesser for PowerSumGuesser {
    fn deck_size(&self) -> usize {
        self.state.n
    }
    fn declared_bits(&self) -> usize {
        self.state.k() * self.state.bits_per_sum()
    }
    fn guess(&mut self, turn: Turn, coins: &mut Coins) -> Card {
        self.pick(turn, coins).unwrap_or(1)
    }
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        self.mark(drawn);
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        self.write(&mut w);
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        self.read(&mut BitReader::new(bits))
    }
}
