//! Parameter sweeps and their CSV output.
//!
//! A grid file holds one JSON object per line, for example
//! `{"n": 1024, "m": 16, "guesser": "subset", "dealer": "shuffle", "trials": 1000}`.
//! Keys: `n`, `guesser`, `dealer`, `trials` (required); `m`, `delta`, `k`,
//! `card`, `order` (optional). Blank lines and lines starting with `#` are skipped.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dealers::{DealerSpec, StaticOrder};
use crate::error::{Error, Result};
use crate::guessers::{GuesserParams, GuesserSpec};

use super::{monte_carlo, theory_for, ExperimentConfig};

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCell {
    pub n: usize,
    pub guesser: String,
    pub dealer: String,
    pub trials: u64,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub card: Option<u32>,
    /// Static dealer order: identity, reverse, bit-reversal or random.
    #[serde(default)]
    pub order: Option<String>,
}

impl SweepCell {
    pub fn specs(&self) -> Result<(GuesserSpec, DealerSpec)> {
        let g = GuesserSpec::from_registry(
            &self.guesser,
            GuesserParams {
                m: self.m,
                k: self.k,
                delta: self.delta,
                card: self.card,
            },
        )?;
        let order = self.order.as_deref().map(StaticOrder::parse).transpose()?;
        let d = DealerSpec::from_registry(&self.dealer, self.m, order)?;
        Ok((g, d))
    }

    pub fn config(&self, seed: u64) -> Result<ExperimentConfig> {
        let (guesser, dealer) = self.specs()?;
        Ok(ExperimentConfig {
            guesser,
            dealer,
            n: self.n,
            m: None,
            trials: self.trials,
            master_seed: seed,
            strict_memory: false,
        })
    }
}

pub const SWEEP_HEADER: [&str; 13] = [
    "guesser",
    "dealer",
    "n",
    "m",
    "delta",
    "trials",
    "mean_correct",
    "stderr_correct",
    "mean_reasonable",
    "stderr_reasonable",
    "theory_name",
    "theory_value",
    "error",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub guesser: String,
    pub dealer: String,
    pub n: usize,
    pub m: Option<usize>,
    pub delta: Option<f64>,
    pub trials: u64,
    pub mean_correct: Option<f64>,
    pub stderr_correct: Option<f64>,
    pub mean_reasonable: Option<f64>,
    pub stderr_reasonable: Option<f64>,
    pub theory_name: Option<&'static str>,
    pub theory_value: Option<f64>,
    pub error: Option<&'static str>,
}

pub fn parse_grid(text: &str) -> Result<Vec<SweepCell>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::param(format!("grid line {}: {e}", i + 1)))
        })
        .collect()
}

fn run_cell(cell: &SweepCell, seed: u64) -> SweepRow {
    let mut row = SweepRow {
        guesser: cell.guesser.clone(),
        dealer: cell.dealer.clone(),
        n: cell.n,
        m: cell.m,
        delta: cell.delta,
        trials: cell.trials,
        mean_correct: None,
        stderr_correct: None,
        mean_reasonable: None,
        stderr_reasonable: None,
        theory_name: None,
        theory_value: None,
        error: None,
    };
    let result = cell.config(seed).and_then(|c| {
        if let Some((name, v)) = theory_for(&c.guesser, &c.dealer, c.n) {
            row.theory_name = Some(name);
            row.theory_value = Some(v);
        }
        row.delta = c.guesser.delta();
        monte_carlo(&c)
    });
    match result {
        Ok(r) => {
            row.mean_correct = Some(r.mean_correct);
            row.stderr_correct = Some(r.stderr_correct);
            row.mean_reasonable = Some(r.mean_reasonable);
            row.stderr_reasonable = Some(r.stderr_reasonable);
        }
        Err(e) => row.error = Some(e.kind()),
    }
    row
}

/// Runs the cells in order; a failing cell yields a row with its error kind.
pub fn run_sweep(cells: &[SweepCell], seed: u64) -> Vec<SweepRow> {
    cells.iter().map(|c| run_cell(c, seed)).collect()
}

pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let io = |e: csv::Error| Error::param(format!("writing CSV: {e}"));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Error::param(format!("writing CSV: {e}")))
}
