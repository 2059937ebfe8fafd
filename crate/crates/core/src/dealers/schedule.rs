//! Epoch schedules. All real-valued formulas are floored; logs are base 2.

use std::f64::consts::E;

use serde::Serialize;

use crate::error::{Error, Result};

/// A `(k, ell)`-epoch that moves at most `u` cards to the back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EpochParams {
    pub k: usize,
    pub ell: usize,
    pub u: usize,
}

impl EpochParams {
    pub fn new(k: usize, ell: usize, u: usize) -> Result<Self> {
        if ell == 0 || ell > k {
            return Err(Error::param(format!("epoch length {ell} not in 1..={k}")));
        }
        if u > (k - ell).min(ell) {
            return Err(Error::param(format!(
                "u={u} exceeds min(k - ell, ell) = {}",
                (k - ell).min(ell)
            )));
        }
        Ok(EpochParams { k, ell, u })
    }

    /// Cards left on the epoch's last turn.
    pub fn last(&self) -> usize {
        self.k - self.ell + 1
    }

    pub fn contains(&self, cards_left: usize) -> bool {
        cards_left <= self.k && cards_left >= self.last()
    }
}

/// Random draws until `k1` cards are left, then the epochs, then random draws
/// again (after a final reshuffle at `cutoff`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub n: usize,
    pub k1: usize,
    pub epochs: Vec<EpochParams>,
    pub cutoff: usize,
}

impl Schedule {
    pub fn new(n: usize, k1: usize, epochs: Vec<EpochParams>, cutoff: usize) -> Result<Self> {
        if k1 > n {
            return Err(Error::param(format!("k1={k1} exceeds n={n}")));
        }
        let mut end = k1 + 1;
        for e in &epochs {
            if e.k >= end {
                return Err(Error::param(format!(
                    "epoch starting at k={} overlaps the previous phase",
                    e.k
                )));
            }
            end = e.last();
        }
        if cutoff >= end {
            return Err(Error::param(format!("cutoff {cutoff} is not after the last epoch")));
        }
        Ok(Schedule {
            n,
            k1,
            epochs,
            cutoff,
        })
    }

    /// `d` back-to-back epochs of length `ell` starting at `k1`, each with the same `u`.
    pub fn contiguous(n: usize, k1: usize, ell: usize, u: usize, d: usize) -> Result<Self> {
        if d * ell > k1 {
            return Err(Error::param(format!("{d} epochs of {ell} turns do not fit in k1={k1}")));
        }
        let epochs = (0..d)
            .map(|i| EpochParams::new(k1 - i * ell, ell, u))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, k1, epochs, k1 - d * ell)
    }

    pub fn epoch_of(&self, cards_left: usize) -> Option<usize> {
        self.epochs.iter().position(|e| e.contains(cards_left))
    }
}

/// Tracks which epoch (if any) the current turn is in.
#[derive(Debug, Clone)]
pub(crate) struct EpochTracker {
    current: Option<usize>,
    next: usize,
}

impl EpochTracker {
    pub(crate) fn new() -> Self {
        EpochTracker { current: None, next: 0 }
    }

    pub(crate) fn current(&self) -> Option<usize> {
        self.current
    }

    /// Moves to the turn with `cards_left` cards; true when the back set must be emptied.
    pub(crate) fn advance(&mut self, schedule: &Schedule, cards_left: usize) -> bool {
        let mut reshuffle = false;
        if let Some(i) = self.current {
            if cards_left < schedule.epochs[i].last() {
                self.current = None;
                reshuffle = true;
            }
        }
        if self.current.is_none() && self.next < schedule.epochs.len() && cards_left == schedule.epochs[self.next].k {
            self.current = Some(self.next);
            self.next += 1;
            reshuffle = true;
        }
        reshuffle || cards_left == schedule.cutoff
    }
}

fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MtbeSchedule {
    pub n: usize,
    pub m: usize,
    pub k1: usize,
    pub ell: usize,
    pub d: usize,
    pub final_cutoff: usize,
    /// `k_i = k1 - (i - 1) ell`.
    pub starts: Vec<usize>,
}

impl MtbeSchedule {
    /// Epochs move up to `u = ell` cards.
    pub fn to_schedule(&self) -> Result<Schedule> {
        let epochs = self
            .starts
            .iter()
            .map(|&k| EpochParams::new(k, self.ell, self.ell))
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(self.n, self.k1, epochs, self.final_cutoff)
    }
}

/// `k1 = n/(8e log n)`, `ell = m log n`, cutoff `2 m log n`, `d = (k1 - cutoff)/ell`.
pub fn mtbe_params(n: usize, m: usize) -> Result<MtbeSchedule> {
    if n < 4 {
        return Err(Error::param(format!("n={n} too small for an adaptive schedule")));
    }
    let lg = log2(n);
    if m == 0 || m as f64 > n as f64 / (lg * lg) {
        return Err(Error::param(format!("m={m} not in 1..=n/log^2 n")));
    }
    let k1 = (n as f64 / (8.0 * E * lg)).floor() as usize;
    let ell = (m as f64 * lg).floor() as usize;
    let final_cutoff = (2.0 * m as f64 * lg).floor() as usize;
    if k1 < final_cutoff + ell {
        return Err(Error::Infeasible(format!(
            "n={n}, m={m}: k1={k1} leaves no epoch of {ell} turns before the cutoff at {final_cutoff}"
        )));
    }
    let d = (k1 - final_cutoff) / ell;
    Ok(MtbeSchedule {
        n,
        m,
        k1,
        ell,
        d,
        final_cutoff,
        starts: (0..d).map(|i| k1 - i * ell).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniversalSchedule {
    pub n: usize,
    pub log_n: f64,
    /// `n/(8e log^2 n)`, the first epoch's start.
    pub k1: usize,
    /// `log_{log n}(n/(8e log^6 n))` before flooring.
    pub d_real: f64,
    pub epochs: Vec<EpochParams>,
    /// `log^4 n`: cards left at the final reshuffle.
    pub tail: usize,
}

impl UniversalSchedule {
    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    pub fn to_schedule(&self) -> Result<Schedule> {
        let end = self.epochs.last().map_or(self.k1 + 1, |e| e.last());
        let cutoff = self.tail.min(end.saturating_sub(1));
        Schedule::new(self.n, self.k1.min(self.n), self.epochs.clone(), cutoff)
    }
}

/// `k_i = n/(8e log^{1+i} n)`, `ell_i = k_i (1 - 1/log n)`, `u_i = 2 ell_i / log^2 n`.
pub fn universal_params(n: usize) -> UniversalSchedule {
    let lg = log2(n.max(2));
    let base = n as f64 / (8.0 * E);
    let d_real = (base / lg.powi(6)).ln() / lg.ln();
    let d = if d_real >= 1.0 { d_real.floor() as usize } else { 0 };
    let mut epochs: Vec<EpochParams> = Vec::new();
    for i in 1..=d {
        let k = (base / lg.powi(1 + i as i32)).floor() as usize;
        let ell = (k as f64 * (1.0 - 1.0 / lg)).floor() as usize;
        let u = (2.0 * ell as f64 / (lg * lg)).floor() as usize;
        let fits = epochs.last().is_none_or(|p| k < p.last());
        match EpochParams::new(k, ell, u) {
            Ok(e) if fits => epochs.push(e),
            _ => break,
        }
    }
    UniversalSchedule {
        n,
        log_n: lg,
        k1: (base / (lg * lg)).floor() as usize,
        d_real,
        epochs,
        tail: lg.powi(4).floor() as usize,
    }
}
