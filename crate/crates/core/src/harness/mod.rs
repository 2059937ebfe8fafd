//! Monte Carlo runs, theory curves and parameter sweeps.

mod sweep;
mod theory;

pub use sweep::{parse_grid, run_sweep, write_sweep_csv, SweepCell, SweepRow, SWEEP_HEADER};
pub use theory::{harmonic, theory_curve, theory_for, TheoryParams, CURVES};

use rayon::prelude::*;
use serde::Serialize;

use crate::dealers::{DealerSpec, EpochParams};
use crate::engine::{derive_streams, play_into, Guesser, MemoryCheck, Tally};
use crate::error::{Error, Result};
use crate::guessers::{AnyGuesser, GuesserSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub guesser: GuesserSpec,
    pub dealer: DealerSpec,
    pub n: usize,
    /// Memory budget for strict mode; the guesser's declared size when `None`.
    pub m: Option<usize>,
    pub trials: u64,
    pub master_seed: u64,
    pub strict_memory: bool,
}

/// Mean and standard error of a per-trial count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpochStat {
    pub params: EpochParams,
    /// Reasonable guesses in the epoch.
    pub reasonable: Estimate,
    /// Correct guesses in the epoch.
    pub correct: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatResult {
    pub trials: u64,
    pub mean_correct: f64,
    pub stderr_correct: f64,
    pub mean_reasonable: f64,
    pub stderr_reasonable: f64,
    pub epochs: Vec<EpochStat>,
    /// Correct guesses summed over all epochs of a game.
    pub epoch_phase_correct: Option<Estimate>,
    pub declared_bits: usize,
    /// Largest serialized state seen (strict mode) or the declared size.
    pub peak_state_bits: usize,
    /// Amplified guesser only: recovered turns and second-half turns, summed over trials.
    pub recovery: Option<(u64, u64)>,
}

impl StatResult {
    pub fn correct(&self) -> Estimate {
        Estimate {
            mean: self.mean_correct,
            stderr: self.stderr_correct,
        }
    }

    pub fn reasonable(&self) -> Estimate {
        Estimate {
            mean: self.mean_reasonable,
            stderr: self.stderr_reasonable,
        }
    }

    pub fn recovery_rate(&self) -> Option<f64> {
        self.recovery
            .filter(|r| r.1 > 0)
            .map(|(rec, total)| rec as f64 / total as f64)
    }
}

/// Integer sums and sums of squares; merging is exact and order-free.
#[derive(Debug, Clone, Default)]
struct Moments {
    sum: u64,
    sum_sq: u128,
}

impl Moments {
    fn add(&mut self, x: u64) {
        self.sum += x;
        self.sum_sq += u128::from(x) * u128::from(x);
    }

    fn merge(&mut self, o: &Moments) {
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
    }

    fn estimate(&self, trials: u64) -> Estimate {
        let t = trials as f64;
        let mean = self.sum as f64 / t;
        if trials < 2 {
            return Estimate { mean, stderr: 0.0 };
        }
        // Exact integer numerator: T * sum_sq - sum^2 = T (T - 1) var.
        let num = u128::from(trials) * self.sum_sq - u128::from(self.sum) * u128::from(self.sum);
        let var = num as f64 / (t * (t - 1.0));
        Estimate {
            mean,
            stderr: (var / t).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Accum {
    correct: Moments,
    reasonable: Moments,
    epoch_reasonable: Vec<Moments>,
    epoch_correct: Vec<Moments>,
    epoch_phase: Moments,
    peak: usize,
    recovered: u64,
    second_half: u64,
}

impl Accum {
    fn with_epochs(d: usize) -> Self {
        Accum {
            epoch_reasonable: vec![Moments::default(); d],
            epoch_correct: vec![Moments::default(); d],
            ..Default::default()
        }
    }

    fn merge(mut self, o: Accum) -> Accum {
        self.correct.merge(&o.correct);
        self.reasonable.merge(&o.reasonable);
        for (a, b) in self.epoch_reasonable.iter_mut().zip(&o.epoch_reasonable) {
            a.merge(b);
        }
        for (a, b) in self.epoch_correct.iter_mut().zip(&o.epoch_correct) {
            a.merge(b);
        }
        self.epoch_phase.merge(&o.epoch_phase);
        self.peak = self.peak.max(o.peak);
        self.recovered += o.recovered;
        self.second_half += o.second_half;
        self
    }
}

/// Plays trial `trial` of `config`; the building block of [`monte_carlo`].
pub fn run_trial(config: &ExperimentConfig, trial: u64) -> Result<(Tally, usize, AnyGuesser)> {
    let mut streams = derive_streams(config.master_seed, trial);
    let mut guesser = config.guesser.build(config.n, &mut streams.guesser_long_lived)?;
    let mut dealer = config
        .dealer
        .build(config.n, &config.guesser, trial, streams.dealer.clone())?;
    let memory = if config.strict_memory {
        MemoryCheck::Strict {
            budget: config.m.unwrap_or(guesser.declared_bits()),
        }
    } else {
        MemoryCheck::Fast
    };
    let mut tally = Tally::default();
    let peak = play_into(&mut guesser, &mut dealer, streams.guesser_on_the_fly, memory, &mut tally)?;
    Ok((tally, peak, guesser))
}

pub fn monte_carlo(config: &ExperimentConfig) -> Result<StatResult> {
    if config.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let declared_bits = config.guesser.declared_bits_for(config.n)?;
    let schedule = config.dealer.schedule(config.n)?;
    let epochs: Vec<EpochParams> = schedule.map(|s| s.epochs).unwrap_or_default();
    let d = epochs.len();

    let acc = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<Accum> {
            let (tally, peak, guesser) = run_trial(config, trial)?;
            let mut a = Accum::with_epochs(d);
            a.correct.add(tally.correct);
            a.reasonable.add(tally.reasonable);
            for i in 0..d {
                a.epoch_reasonable[i].add(tally.epoch_reasonable.get(i).copied().unwrap_or(0));
                a.epoch_correct[i].add(tally.epoch_correct.get(i).copied().unwrap_or(0));
            }
            a.epoch_phase.add(tally.epoch_correct.iter().sum());
            a.peak = peak;
            if let Some(g) = guesser.as_amplified() {
                a.recovered = g.recovered_turns();
                a.second_half = g.second_half_turns();
            }
            Ok(a)
        })
        .try_reduce(|| Accum::with_epochs(d), |a, b| Ok(a.merge(b)))?;

    let t = config.trials;
    let correct = acc.correct.estimate(t);
    let reasonable = acc.reasonable.estimate(t);
    Ok(StatResult {
        trials: t,
        mean_correct: correct.mean,
        stderr_correct: correct.stderr,
        mean_reasonable: reasonable.mean,
        stderr_reasonable: reasonable.stderr,
        epochs: epochs
            .iter()
            .enumerate()
            .map(|(i, p)| EpochStat {
                params: *p,
                reasonable: acc.epoch_reasonable[i].estimate(t),
                correct: acc.epoch_correct[i].estimate(t),
            })
            .collect(),
        epoch_phase_correct: (d > 0).then(|| acc.epoch_phase.estimate(t)),
        declared_bits,
        peak_state_bits: acc.peak,
        recovery: matches!(config.guesser, GuesserSpec::Amplified { .. }).then_some((acc.recovered, acc.second_half)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(guesser: GuesserSpec, dealer: DealerSpec, n: usize, trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            guesser,
            dealer,
            n,
            m: None,
            trials,
            master_seed: 11,
            strict_memory: false,
        }
    }

    #[test]
    fn memoryless_scores_exactly_one() {
        let r = monte_carlo(&config(GuesserSpec::Memoryless { card: 2 }, DealerSpec::Shuffle, 64, 100)).unwrap();
        assert_eq!(r.mean_correct, 1.0);
        assert_eq!(r.stderr_correct, 0.0);
    }

    #[test]
    fn single_trial_is_reproducible() {
        let c = config(GuesserSpec::Subset { m: 8 }, DealerSpec::Shuffle, 256, 1);
        assert_eq!(monte_carlo(&c).unwrap(), monte_carlo(&c).unwrap());
    }

    #[test]
    fn moments_match_two_pass_variance() {
        let xs = [3u64, 0, 7, 7, 1, 2];
        let mut m = Moments::default();
        xs.iter().for_each(|&x| m.add(x));
        let e = m.estimate(xs.len() as u64);
        let mean = xs.iter().sum::<u64>() as f64 / 6.0;
        let var = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / 5.0;
        assert!((e.mean - mean).abs() < 1e-12);
        assert!((e.stderr - (var / 6.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn epoch_tallies_follow_the_schedule() {
        let s = crate::dealers::Schedule::contiguous(256, 64, 16, 16, 3).unwrap();
        let r = monte_carlo(&config(GuesserSpec::Subset { m: 16 }, DealerSpec::Epochs(s), 256, 200)).unwrap();
        assert_eq!(r.epochs.len(), 3);
        for e in &r.epochs {
            assert!(e.correct.mean <= e.reasonable.mean);
        }
        let phase: f64 = r.epochs.iter().map(|e| e.correct.mean).sum();
        assert!((phase - r.epoch_phase_correct.unwrap().mean).abs() < 1e-9);
    }

    #[test]
    fn strict_mode_catches_small_budgets() {
        let mut c = config(GuesserSpec::Subset { m: 8 }, DealerSpec::Shuffle, 64, 2);
        c.strict_memory = true;
        c.m = Some(7);
        assert!(matches!(monte_carlo(&c), Err(Error::MemoryBudgetExceeded { .. })));
        c.m = Some(8);
        assert_eq!(monte_carlo(&c).unwrap().peak_state_bits, 8);
    }
}
