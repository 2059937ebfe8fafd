//! Amplified Random-Subsets: several independent k-wise bucketings, probed in
//! order until one has a single unseen card.

use rand::Rng;

use crate::bits::{BitReader, BitString, BitWriter, Bits};
use crate::engine::{Card, Coins, Guesser, Turn};
use crate::error::{Error, Result};
use crate::hashing::{bucket_of, sample_kwise, Field, FieldSpec, KWisePoly};

use super::basic::check_state_len;
use super::randomized::target_bucket;

/// `ceil(2.5 log2(1/delta))`.
pub fn function_count(delta: f64) -> usize {
    (2.5 * (1.0 / delta).log2() - 1e-9).ceil().max(1.0) as usize
}

#[derive(Debug, Clone)]
pub struct AmplifiedSubsets {
    n: usize,
    ell: u32,
    functions: Vec<KWisePoly>,
    /// `bucket[f * n + card - 1]`: bucket of `card` under function `f`.
    bucket: Vec<u8>,
    /// Per `(f, j)`, row-major with stride `ell + 1`: bucket size and sum of `card - 1` mod n.
    size: Vec<u32>,
    total: Vec<u32>,
    count: Vec<u32>,
    sum: Vec<u32>,
    recovered_turns: u64,
    second_half_turns: u64,
}

impl AmplifiedSubsets {
    pub fn sample<R: Rng + ?Sized>(n: usize, delta: f64, k: usize, rng: &mut R) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param(format!("delta={delta} outside (0, 1)")));
        }
        let spec = FieldSpec::for_deck(n)?;
        let ell = spec.ell;
        if k < 2 * ell as usize {
            return Err(Error::param(format!("k={k} below 2 log n = {}", 2 * ell)));
        }
        let field = Field::new(spec);
        let r = function_count(delta);
        let functions: Vec<KWisePoly> = (0..r).map(|_| sample_kwise(field, k, rng)).collect();
        let stride = ell as usize + 1;
        let mut bucket = vec![0u8; r * n];
        let mut size = vec![0u32; r * stride];
        let mut total = vec![0u32; r * stride];
        for (f, poly) in functions.iter().enumerate() {
            for card in 1..=n as Card {
                let j = bucket_of(poly.hash_card(card), ell) as usize;
                bucket[f * n + card as usize - 1] = j as u8;
                size[f * stride + j] += 1;
                total[f * stride + j] = ((total[f * stride + j] as u64 + card as u64 - 1) % n as u64) as u32;
            }
        }
        Ok(AmplifiedSubsets {
            n,
            ell,
            functions,
            bucket,
            size,
            total,
            count: vec![0; r * stride],
            sum: vec![0; r * stride],
            recovered_turns: 0,
            second_half_turns: 0,
        })
    }

    /// Two `log n`-bit fields per bucket per function.
    pub fn layout_bits(n: usize, delta: f64) -> usize {
        let ell = n.trailing_zeros() as usize;
        function_count(delta) * ell * 2 * ell
    }

    pub fn function_count(&self) -> usize {
        self.functions.len()
    }

    pub fn random_bits(&self) -> usize {
        self.functions.len() * self.functions[0].k() * self.ell as usize
    }

    /// Second-half turns so far on which some bucket held exactly one unseen card.
    pub fn recovered_turns(&self) -> u64 {
        self.recovered_turns
    }

    pub fn second_half_turns(&self) -> u64 {
        self.second_half_turns
    }

    fn width(&self) -> usize {
        self.ell as usize
    }

    fn stride(&self) -> usize {
        self.ell as usize + 1
    }
}

impl Guesser for AmplifiedSubsets {
    fn deck_size(&self) -> usize {
        self.n
    }
    fn declared_bits(&self) -> usize {
        self.functions.len() * self.ell as usize * 2 * self.width()
    }
    fn guess(&mut self, turn: Turn, _coins: &mut Coins) -> Card {
        let c = turn.cards_left();
        if 2 * c > self.n {
            return 1;
        }
        self.second_half_turns += 1;
        let j = target_bucket(self.n, c, self.ell) as usize;
        let n = self.n as u64;
        for f in 0..self.functions.len() {
            let i = f * self.stride() + j;
            if self.size[i] > 0 && self.count[i] + 1 == self.size[i] {
                self.recovered_turns += 1;
                return ((self.total[i] as u64 + n - self.sum[i] as u64) % n) as Card + 1;
            }
        }
        1
    }
    #[inline]
    fn observe(&mut self, _turn: Turn, drawn: Card) {
        let stride = self.stride();
        let n = self.n as u32;
        for f in 0..self.functions.len() {
            let j = self.bucket[f * self.n + drawn as usize - 1] as usize;
            let i = f * stride + j;
            self.count[i] = (self.count[i] + 1) % n;
            self.sum[i] = ((self.sum[i] as u64 + drawn as u64 - 1) % n as u64) as u32;
        }
    }
    fn save_state(&self) -> BitString {
        let mut w = BitWriter::with_capacity(self.declared_bits());
        let width = self.width();
        for f in 0..self.functions.len() {
            for j in 1..=self.ell as usize {
                let i = f * self.stride() + j;
                w.push_uint(self.count[i] as u64, width);
                w.push_uint(self.sum[i] as u64, width);
            }
        }
        w.finish()
    }
    fn load_state(&mut self, bits: &Bits) -> Result<()> {
        check_state_len(bits, self.declared_bits())?;
        let mut r = BitReader::new(bits);
        let width = self.width();
        for f in 0..self.functions.len() {
            for j in 1..=self.ell as usize {
                let i = f * self.stride() + j;
                self.count[i] = r.read_uint(width)? as u32;
                self.sum[i] = r.read_uint(width)? as u32;
            }
        }
        Ok(())
    }
}
