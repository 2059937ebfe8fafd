//! Pairwise-independent permutations, k-wise independent polynomials and
//! dyadic buckets over GF(2^ell).
//!
//! Cards `1..=n` map to field elements by subtracting one, and hash values map
//! back to `1..=n` by adding one, so a field of size `n` permutes the deck
//! exactly.

mod field;

pub use field::{
    is_irreducible, mul_reference, Field, ScalarMul, FieldSpec, MAX_ELL, REDUCTION_POLYNOMIALS, TABLE_MAX_ELL,
};

use rand::Rng;

/// `x -> a*x + b` with `a != 0`.
#[derive(Debug, Clone, Copy)]
pub struct PairwisePerm {
    pub a: u32,
    pub b: u32,
    times_a: ScalarMul,
    times_a_inv: ScalarMul,
}

impl PairwisePerm {
    pub fn new(field: Field, a: u32, b: u32) -> crate::error::Result<Self> {
        let a_inv = field.inverse(a)?;
        Ok(PairwisePerm {
            a,
            b,
            times_a: ScalarMul::new(&field, a),
            times_a_inv: ScalarMul::new(&field, a_inv),
        })
    }

    /// Long-lived bits charged for one sample.
    pub fn random_bits(field: &Field) -> usize {
        2 * field.ell() as usize
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.times_a.apply(x) ^ self.b
    }

    #[inline]
    pub fn invert(&self, y: u32) -> u32 {
        self.times_a_inv.apply(y ^ self.b)
    }

    /// Hash value in `1..=n` of a card in `1..=n`.
    #[inline]
    pub fn hash_card(&self, card: u32) -> u32 {
        self.eval(card - 1) + 1
    }

    #[inline]
    pub fn card_of_value(&self, y: u32) -> u32 {
        self.invert(y - 1) + 1
    }
}

pub fn sample_pairwise<R: Rng + ?Sized>(field: Field, rng: &mut R) -> PairwisePerm {
    let q = field.order() as u32;
    let a = rng.gen_range(1..q);
    let b = rng.gen_range(0..q);
    PairwisePerm::new(field, a, b).expect("a is nonzero")
}

/// Polynomial of degree at most `k - 1`; `coeffs[i]` multiplies `x^i`.
#[derive(Debug, Clone)]
pub struct KWisePoly {
    field: Field,
    pub coeffs: Vec<u32>,
}

impl KWisePoly {
    pub fn new(field: Field, coeffs: Vec<u32>) -> Self {
        assert!(!coeffs.is_empty(), "a k-wise polynomial needs k >= 1 coefficients");
        KWisePoly { field, coeffs }
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn random_bits(field: &Field, k: usize) -> usize {
        k * field.ell() as usize
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.field.mul(acc, x) ^ c)
    }

    #[inline]
    pub fn hash_card(&self, card: u32) -> u32 {
        self.eval(card - 1) + 1
    }
}

pub fn sample_kwise<R: Rng + ?Sized>(field: Field, k: usize, rng: &mut R) -> KWisePoly {
    let q = field.order() as u32;
    KWisePoly::new(field, (0..k).map(|_| rng.gen_range(0..q)).collect())
}

/// Bucket index of a hash value `y` in `1..=2^ell`: `ceil(log2 y)`, with 1 and 2
/// both in bucket 1.
#[inline]
pub fn bucket_of(y: u32, ell: u32) -> u32 {
    debug_assert!(y >= 1 && (y as u64) <= 1u64 << ell);
    if y <= 2 {
        1
    } else {
        32 - (y - 1).leading_zeros()
    }
}

/// Inclusive value range `(lo, hi)` covered by bucket `j`.
#[inline]
pub fn bucket_range(j: u32) -> (u32, u32) {
    if j == 1 {
        (1, 2)
    } else {
        ((1 << (j - 1)) + 1, 1 << j)
    }
}

#[inline]
pub fn bucket_size(j: u32) -> u32 {
    if j == 1 {
        2
    } else {
        1 << (j - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn field(ell: u32) -> Field {
        Field::new(FieldSpec::new(ell).unwrap())
    }

    #[test]
    fn identity_member() {
        let p = PairwisePerm::new(field(4), 1, 0).unwrap();
        for x in 0..16 {
            assert_eq!(p.eval(x), x);
        }
    }

    #[test]
    fn pairwise_family_is_exactly_pairwise_independent() {
        for ell in [2u32, 3] {
            let f = field(ell);
            let q = 1u32 << ell;
            let family: Vec<PairwisePerm> = (1..q)
                .flat_map(|a| (0..q).map(move |b| (a, b)))
                .map(|(a, b)| PairwisePerm::new(f, a, b).unwrap())
                .collect();
            assert_eq!(family.len(), ((q - 1) * q) as usize);
            for x1 in 0..q {
                for x2 in (0..q).filter(|&x| x != x1) {
                    let mut hits: HashMap<(u32, u32), usize> = HashMap::new();
                    for p in &family {
                        *hits.entry((p.eval(x1), p.eval(x2))).or_default() += 1;
                    }
                    // every ordered pair of distinct outputs exactly once, nothing else
                    assert_eq!(hits.len(), ((q - 1) * q) as usize);
                    assert!(hits.iter().all(|(&(y1, y2), &c)| y1 != y2 && c == 1));
                }
            }
        }
    }

    #[test]
    fn pairwise_eval_is_a_bijection_with_inverse() {
        let f = field(10);
        let mut rng = crate::engine::chacha_from_key(3);
        let p = sample_pairwise(f, &mut rng);
        let mut seen = vec![false; 1024];
        for card in 1..=1024 {
            let y = p.hash_card(card);
            assert!(!seen[y as usize - 1]);
            seen[y as usize - 1] = true;
            assert_eq!(p.card_of_value(y), card);
        }
        assert_eq!(PairwisePerm::random_bits(&f), 20);
    }

    #[test]
    fn kwise_family_on_gf4_matches_uniform_law() {
        let f = field(2);
        for k in 1..=3usize {
            let total = 4usize.pow(k as u32);
            let polys: Vec<KWisePoly> = (0..total)
                .map(|code| KWisePoly::new(f, (0..k).map(|i| ((code >> (2 * i)) & 3) as u32).collect()))
                .collect();
            // every k distinct inputs, every output tuple: exactly one polynomial
            let inputs: Vec<Vec<u32>> = distinct_tuples(4, k);
            for xs in &inputs {
                let mut hits: HashMap<Vec<u32>, usize> = HashMap::new();
                for p in &polys {
                    *hits.entry(xs.iter().map(|&x| p.eval(x)).collect()).or_default() += 1;
                }
                assert_eq!(hits.len(), total);
                assert!(hits.values().all(|&c| c == 1));
            }
        }
    }

    fn distinct_tuples(q: u32, k: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for t in &out {
                for x in (0..q).filter(|x| !t.contains(x)) {
                    let mut t = t.clone();
                    t.push(x);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn constant_polynomial() {
        let p = KWisePoly::new(field(3), vec![5]);
        assert!((0..8).all(|x| p.eval(x) == 5));
        assert_eq!(KWisePoly::random_bits(&field(3), 4), 12);
    }

    #[test]
    fn buckets() {
        assert_eq!(bucket_of(1, 3), 1);
        assert_eq!(bucket_of(2, 3), 1);
        assert_eq!(bucket_of(5, 3), 3);
        assert_eq!(bucket_of(8, 3), 3);
        assert_eq!(bucket_of(1024, 10), 10);
        for ell in 1..=10u32 {
            let mut sizes = vec![0u32; ell as usize + 1];
            for y in 1..=(1u32 << ell) {
                let j = bucket_of(y, ell);
                let (lo, hi) = bucket_range(j);
                assert!(lo <= y && y <= hi);
                sizes[j as usize] += 1;
            }
            for j in 1..=ell {
                assert_eq!(sizes[j as usize], bucket_size(j));
            }
        }
    }
}
