//! Analytic codeword lengths, in bits.

use serde::Serialize;
use statrs::function::factorial::ln_binomial;

fn log2_binomial(n: usize, k: usize) -> f64 {
    ln_binomial(n as u64, k as u64) / std::f64::consts::LN_2
}

/// `w = log2(2 * 2^m * 2^alpha * C(n, k1 - alpha) * C(ell, alpha))`.
pub fn codeword_length_w(m: usize, k1: usize, ell: usize, alpha: usize, n: usize) -> f64 {
    assert!(alpha <= k1.min(ell), "alpha={alpha} exceeds min(k1={k1}, ell={ell})");
    1.0 + m as f64 + alpha as f64 + log2_binomial(n, k1 - alpha) + log2_binomial(ell, alpha)
}

/// Entropy of a uniform `k1`-subset of `1..=n`.
pub fn subset_entropy(n: usize, k1: usize) -> f64 {
    log2_binomial(n, k1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompressionRow {
    pub alpha: usize,
    pub w: f64,
    /// `H - w`; positive when the codeword beats the entropy.
    pub savings: f64,
    pub compresses: bool,
}

pub fn compression_diagnostics(
    m: usize,
    k1: usize,
    ell: usize,
    n: usize,
    alphas: impl IntoIterator<Item = usize>,
) -> Vec<CompressionRow> {
    let h = subset_entropy(n, k1);
    alphas
        .into_iter()
        .filter(|&a| a <= k1.min(ell))
        .map(|alpha| {
            let w = codeword_length_w(m, k1, ell, alpha, n);
            CompressionRow {
                alpha,
                w,
                savings: h - w,
                compresses: w < h,
            }
        })
        .collect()
}

/// `ceil(max(8e k1 ell / n, m))`: the reasonable-guess count above which the code compresses.
pub fn compression_threshold(m: usize, k1: usize, ell: usize, n: usize) -> usize {
    let r = 8.0 * std::f64::consts::E * k1 as f64 * ell as f64 / n as f64;
    r.max(m as f64).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::rank::binomial;
    use crate::codec::unordered_length;

    #[test]
    fn five_bit_example() {
        assert!((codeword_length_w(1, 2, 1, 1, 4) - 5.0).abs() < 1e-9);
    }

    #[test]
    fn alpha_zero_is_memory_plus_entropy() {
        for (m, k1, ell, n) in [(3, 10, 4, 100), (0, 5, 5, 20), (16, 128, 32, 16384)] {
            let w = codeword_length_w(m, k1, ell, 0, n);
            assert!((w - (1.0 + m as f64 + subset_entropy(n, k1))).abs() < 1e-6);
        }
    }

    #[test]
    fn log_gamma_matches_exact_binomials() {
        for (n, k) in [(16, 8), (100, 3), (4096, 64), (1 << 14, 128)] {
            let exact = binomial(n, k);
            let bits = exact.bits() as f64;
            let approx = log2_binomial(n, k);
            assert!(approx <= bits && approx > bits - 1.0, "{n} {k}");
        }
    }

    #[test]
    fn emitted_length_is_within_one_bit_of_ceiling() {
        for (m, k1, ell, n) in [(2, 8, 2, 16), (8, 64, 16, 4096), (4, 20, 7, 300)] {
            for alpha in 0..=ell.min(k1) {
                let w = codeword_length_w(m, k1, ell, alpha, n);
                let len = unordered_length(m, n, k1, ell, alpha) as f64;
                assert!(len >= w.ceil() - 1e-9 && len <= w.ceil() + 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn compression_crosses_zero() {
        let rows = compression_diagnostics(8, 128, 32, 1 << 14, 0..=32);
        assert!(rows[0].savings < 0.0);
        let t = compression_threshold(8, 128, 32, 1 << 14);
        assert!(rows[t].compresses);
    }
}
