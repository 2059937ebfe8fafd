//! Arithmetic in GF(2^ell).
//!
//! Elements are the integers `0..2^ell` read as polynomials over GF(2). Two
//! multiplication routes are kept: carry-less shift-and-reduce, and log/antilog
//! tables for `ell <= TABLE_MAX_ELL`. Tests hold them to each other.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Irreducible reduction polynomials, indexed by `ell` (entry 0 unused).
///
/// | ell | poly | ell | poly | ell | poly |
/// |-----|------|-----|------|-----|------|
/// | 1 | 0x3 | 11 | 0x805 | 21 | 0x200005 |
/// | 2 | 0x7 | 12 | 0x1053 | 22 | 0x400003 |
/// | 3 | 0xB | 13 | 0x201B | 23 | 0x800021 |
/// | 4 | 0x13 | 14 | 0x4443 | 24 | 0x1000087 |
/// | 5 | 0x25 | 15 | 0x8003 | 25 | 0x2000009 |
/// | 6 | 0x43 | 16 | 0x1100B | 26 | 0x4000047 |
/// | 7 | 0x83 | 17 | 0x20009 | 27 | 0x8000027 |
/// | 8 | 0x11D | 18 | 0x40081 | 28 | 0x10000009 |
/// | 9 | 0x211 | 19 | 0x80027 | 29 | 0x20000005 |
/// | 10 | 0x409 | 20 | 0x100009 | 30 | 0x40800007 |
pub const REDUCTION_POLYNOMIALS: [u64; 31] = [
    0, 0x3, 0x7, 0xB, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B, 0x20009, 0x40081, 0x80027, 0x100009, 0x200005, 0x400003,
    0x800021, 0x1000087, 0x2000009, 0x4000047, 0x8000027, 0x10000009, 0x20000005, 0x40800007,
];

pub const MAX_ELL: u32 = 30;
pub const TABLE_MAX_ELL: u32 = 22;

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Remainder of `a` divided by `b` as GF(2) polynomials.
fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
pub fn is_irreducible(poly: u64) -> bool {
    let d = degree(poly);
    if d < 1 {
        return false;
    }
    for dd in 1..=d / 2 {
        for low in 0..(1u64 << dd) {
            if poly_rem(poly, (1u64 << dd) | low) == 0 {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldSpec {
    pub ell: u32,
    pub reduction_polynomial: u64,
}

static VERIFIED: [OnceLock<bool>; MAX_ELL as usize + 1] = [const { OnceLock::new() }; MAX_ELL as usize + 1];

impl FieldSpec {
    /// The published field of size `2^ell`.
    pub fn new(ell: u32) -> Result<Self> {
        if !(1..=MAX_ELL).contains(&ell) {
            return Err(Error::param(format!("field degree {ell} outside 1..={MAX_ELL}")));
        }
        let poly = REDUCTION_POLYNOMIALS[ell as usize];
        let ok = *VERIFIED[ell as usize].get_or_init(|| is_irreducible(poly));
        if !ok {
            return Err(Error::param(format!("table polynomial {poly:#x} is reducible")));
        }
        Ok(FieldSpec {
            ell,
            reduction_polynomial: poly,
        })
    }

    /// The field whose size equals the deck size `n` (a power of two).
    pub fn for_deck(n: usize) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::param(format!("deck size {n} is not a power of two >= 2")));
        }
        Self::new(n.trailing_zeros())
    }

    pub fn with_polynomial(ell: u32, poly: u64) -> Result<Self> {
        if degree(poly) != ell as i32 || !is_irreducible(poly) {
            return Err(Error::param(format!(
                "{poly:#x} is not an irreducible polynomial of degree {ell}"
            )));
        }
        Ok(FieldSpec {
            ell,
            reduction_polynomial: poly,
        })
    }

    pub fn order(&self) -> u64 {
        1u64 << self.ell
    }
}

/// Carry-less product reduced modulo the field polynomial.
pub fn mul_reference(spec: &FieldSpec, a: u64, b: u64) -> u64 {
    let top = 1u64 << spec.ell;
    let (mut a, mut b, mut acc) = (a, b, 0u64);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= spec.reduction_polynomial;
        }
    }
    acc
}

fn pow_reference(spec: &FieldSpec, mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_reference(spec, acc, base);
        }
        base = mul_reference(spec, base, base);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            out.push(p);
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

/// Smallest element generating the multiplicative group.
fn find_generator(spec: &FieldSpec) -> u64 {
    let group = spec.order() - 1;
    if group == 1 {
        return 1;
    }
    let factors = prime_factors(group);
    (2..spec.order())
        .find(|&g| factors.iter().all(|&p| pow_reference(spec, g, group / p) != 1))
        .expect("a finite field has a primitive element")
}

#[derive(Debug)]
pub struct Tables {
    /// `exp[i] = g^i`, doubled so `log a + log b` never needs a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Tables {
    fn build(spec: &FieldSpec) -> Self {
        let group = (spec.order() - 1) as usize;
        let g = find_generator(spec);
        let mut exp = vec![0u32; 2 * group.max(1)];
        let mut log = vec![0u32; spec.order() as usize];
        let mut x = 1u64;
        for i in 0..group {
            exp[i] = x as u32;
            log[x as usize] = i as u32;
            x = mul_reference(spec, x, g);
        }
        for i in group..2 * group {
            exp[i] = exp[i - group];
        }
        Tables { exp, log }
    }
}

static TABLES: [OnceLock<Tables>; TABLE_MAX_ELL as usize + 1] =
    [const { OnceLock::new() }; TABLE_MAX_ELL as usize + 1];

/// Arithmetic bundle for one field; cheap to copy and share.
#[derive(Debug, Clone, Copy)]
pub struct Field {
    spec: FieldSpec,
    tables: Option<&'static Tables>,
}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let published = REDUCTION_POLYNOMIALS.get(spec.ell as usize) == Some(&spec.reduction_polynomial);
        let tables = (published && spec.ell <= TABLE_MAX_ELL)
            .then(|| TABLES[spec.ell as usize].get_or_init(|| Tables::build(&spec)));
        Field { spec, tables }
    }

    /// Same field without lookup tables.
    pub fn reference(spec: FieldSpec) -> Self {
        Field { spec, tables: None }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn ell(&self) -> u32 {
        self.spec.ell
    }

    pub fn order(&self) -> u64 {
        self.spec.order()
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            None => mul_reference(&self.spec, a as u64, b as u64) as u32,
        }
    }

    pub fn inverse(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero { ell: self.spec.ell });
        }
        let group = self.order() - 1;
        Ok(match self.tables {
            Some(t) => t.exp[((group - t.log[a as usize] as u64) % group) as usize],
            None => pow_reference(&self.spec, a as u64, group - 1) as u32,
        })
    }
}

/// Multiplication by a fixed element. The map is GF(2)-linear, so it splits
/// into one 256-entry table per input byte.
#[derive(Debug, Clone, Copy)]
pub struct ScalarMul {
    bytes: usize,
    table: [[u32; 256]; 4],
}

impl ScalarMul {
    pub fn new(field: &Field, c: u32) -> Self {
        let bytes = (field.ell() as usize).div_ceil(8);
        let mut table = [[0u32; 256]; 4];
        for (i, row) in table.iter_mut().enumerate().take(bytes) {
            for (x, e) in row.iter_mut().enumerate() {
                let v = ((x as u64) << (8 * i)) & (field.order() - 1);
                *e = mul_reference(field.spec(), u64::from(c), v) as u32;
            }
        }
        ScalarMul { bytes, table }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        let mut acc = 0;
        for i in 0..self.bytes {
            acc ^= self.table[i][((x >> (8 * i)) & 0xff) as usize];
        }
        acc
    }
}
