//! Closed-form predictions. `log` is base 2, `ln` natural, as in the source formulas.

use std::f64::consts::E;

use crate::dealers::DealerSpec;
use crate::error::{Error, Result};
use crate::guessers::GuesserSpec;

pub const CURVES: [&str; 9] = [
    "half_log",
    "general_delta",
    "quarter_ln",
    "subset",
    "combined",
    "static_bound",
    "adaptive_bound",
    "universal_bound",
    "harmonic",
];

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TheoryParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub delta: Option<f64>,
}

/// Exact `H_n` by summation.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).rev().map(|i| 1.0 / i as f64).sum()
}

pub fn theory_curve(name: &str, p: TheoryParams) -> Result<f64> {
    let need_n = || {
        p.n.map(|n| n as f64)
            .ok_or_else(|| Error::param(format!("curve `{name}` needs n")))
    };
    let need_m = || {
        p.m.map(|m| m as f64)
            .ok_or_else(|| Error::param(format!("curve `{name}` needs m")))
    };
    Ok(match name {
        // Following-Subsets, delta = 1
        "half_log" => 0.5 * need_n()?.log2(),
        // Following-Subsets with ranges growing by (1 + delta)
        "general_delta" => {
            let d = p.delta.ok_or_else(|| Error::param("curve `general_delta` needs delta"))?;
            d / ((1.0 + d) * (1.0 + d).ln()) * need_n()?.ln()
        }
        // Randomized-Subsets
        "quarter_ln" => 0.25 * need_n()?.ln(),
        "subset" => need_m()?.ln(),
        "combined" => 2.0 * need_m()?.ln() - need_n()?.log2().ln(),
        // Upper bound for any m-bit guesser against static dealers
        "static_bound" => 2.0 * (need_m()? + 1.0).sqrt() + 2.0,
        // Upper bound against the MtBE dealer
        "adaptive_bound" => need_m()?.ln() + 2.0 * need_n()?.log2().ln() + (16.0 * E).ln(),
        "universal_bound" => 8.0 * need_n()?.log2().ln(),
        // Perfect memory against a shuffled deck
        "harmonic" => harmonic(p.n.ok_or_else(|| Error::param("curve `harmonic` needs n"))?),
        other => return Err(Error::UnknownCurve(other.to_string())),
    })
}

/// The curve a sweep cell is compared against, if any.
pub fn theory_for(guesser: &GuesserSpec, dealer: &DealerSpec, n: usize) -> Option<(&'static str, f64)> {
    let p = |m: Option<usize>, delta: Option<f64>| TheoryParams { n: Some(n), m, delta };
    let (name, params) = match (dealer, guesser) {
        (DealerSpec::Mtbe { m } | DealerSpec::MtbeMinOrder { m }, _) => ("adaptive_bound", p(Some(*m), None)),
        (DealerSpec::Universal, _) => ("universal_bound", p(None, None)),
        (_, GuesserSpec::Following { delta }) if *delta == 1.0 => ("half_log", p(None, None)),
        (_, GuesserSpec::Following { delta }) => ("general_delta", p(None, Some(*delta))),
        (_, GuesserSpec::Randomized) => ("quarter_ln", p(None, None)),
        (_, GuesserSpec::Subset { m }) => ("subset", p(Some(*m), None)),
        (_, GuesserSpec::Combined { m }) => ("combined", p(Some(*m), None)),
        (DealerSpec::Shuffle, GuesserSpec::Perfect) => ("harmonic", p(None, None)),
        _ => return None,
    };
    theory_curve(name, params).ok().map(|v| (name, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn np(n: usize) -> TheoryParams {
        TheoryParams { n: Some(n), ..Default::default() }
    }

    #[test]
    fn known_values() {
        assert!((theory_curve("half_log", np(1024)).unwrap() - 5.0).abs() < 1e-12);
        let a = theory_curve(
            "adaptive_bound",
            TheoryParams { n: Some(1 << 20), m: Some(16), delta: None },
        )
        .unwrap();
        assert!((a - 12.54).abs() < 0.005, "{a}");
        assert!((harmonic(1000) - 7.485_470_860_550_345).abs() < 1e-12);
    }

    #[test]
    fn general_delta_at_one_is_half_log() {
        for n in [256usize, 1024, 1 << 20] {
            let g = theory_curve("general_delta", TheoryParams { n: Some(n), m: None, delta: Some(1.0) }).unwrap();
            assert!((g - theory_curve("half_log", np(n)).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn unknown_curve() {
        assert!(matches!(theory_curve("folklore", np(4)), Err(Error::UnknownCurve(_))));
        assert!(theory_curve("subset", np(4)).is_err());
    }

    #[test]
    fn sweep_theory_columns() {
        let f = GuesserSpec::Following { delta: 1.0 };
        assert_eq!(theory_for(&f, &DealerSpec::Shuffle, 256), Some(("half_log", 4.0)));
        assert_eq!(theory_for(&f, &DealerSpec::Shuffle, 1024), Some(("half_log", 5.0)));
        assert_eq!(theory_for(&GuesserSpec::Memoryless { card: 1 }, &DealerSpec::Shuffle, 8), None);
    }
}
