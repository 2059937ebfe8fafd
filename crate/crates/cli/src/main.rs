use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use card_guessing::codec::{decode_o, decode_u, encode_o, encode_u, Gamma};
use card_guessing::dealers::{
    load_arrangements, mtbe_params, universal_params, DealerSpec, MinOrderRandomness, Schedule, StaticOrder,
};
use card_guessing::engine::{chacha_from_key, mix_words, Card};
use card_guessing::guessers::{GuesserParams, GuesserSpec};
use card_guessing::harness::{monte_carlo, parse_grid, run_sweep, theory_for, write_sweep_csv, ExperimentConfig, SweepCell, SweepRow};
use card_guessing::Error;

#[derive(Parser)]
#[command(name = "card-guessing", version, about = "Memory-bounded card guessing experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and print its statistics.
    Simulate(SimulateArgs),
    /// Run a grid of configurations and emit CSV.
    Sweep(SweepArgs),
    /// Print an adaptive dealer's epoch schedule.
    Params(ParamsArgs),
    /// Encode and decode random instances with one of the codecs.
    CodecRoundtrip(CodecArgs),
}

#[derive(Args)]
struct GuesserFlags {
    /// memoryless | perfect | subset | power_sum | combined | following | randomized | amplified,
    /// or shrunk-<kind>
    #[arg(long)]
    guesser: String,
    /// Memory bits (subset, combined, shrunk-*) and the MtBE dealer's m.
    #[arg(long)]
    m: Option<usize>,
    /// Power sums (power_sum) or hash independence (amplified).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// The memoryless guesser's card.
    #[arg(long)]
    card: Option<Card>,
}

impl GuesserFlags {
    fn spec(&self) -> Result<GuesserSpec, Error> {
        GuesserSpec::from_registry(
            &self.guesser,
            GuesserParams {
                m: self.m,
                k: self.k,
                delta: self.delta,
                card: self.card,
            },
        )
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    guesser: GuesserFlags,
    /// shuffle | static | static-adversarial | mtbe | mtbe-minorder | universal
    #[arg(long)]
    dealer: String,
    /// Static dealer order: identity | reverse | bit-reversal | random.
    #[arg(long)]
    order: Option<String>,
    /// Static dealer arrangements, one permutation per line; trial i uses line i mod count.
    #[arg(long, conflicts_with = "order")]
    arrangements: Option<PathBuf>,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Serialize the guesser state every turn and enforce the memory budget.
    #[arg(long)]
    strict: bool,
    /// Memory budget for --strict (defaults to the declared size).
    #[arg(long)]
    budget: Option<usize>,
    /// Also write the result as a one-row sweep CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid file: one JSON object per line.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Cartesian grid flags (used without --grid).
    #[arg(long = "n", num_args = 1..)]
    ns: Vec<usize>,
    #[arg(long = "m", num_args = 1..)]
    ms: Vec<usize>,
    #[arg(long = "guesser", num_args = 1..)]
    guessers: Vec<String>,
    #[arg(long = "dealer", num_args = 1..)]
    dealers: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (standard output by default).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleKind {
    Mtbe,
    Universal,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long, value_enum)]
    dealer: ScheduleKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CodecKind {
    Ordered,
    Unordered,
}

#[derive(Args)]
struct CodecArgs {
    #[arg(long, value_enum)]
    codec: CodecKind,
    #[arg(long)]
    n: usize,
    /// Suffix length (ordered) or reserved-set size k1 (unordered).
    #[arg(long)]
    k: usize,
    #[arg(long)]
    alpha: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "perfect")]
    guesser: String,
    #[arg(long)]
    m: Option<usize>,
    /// Unordered codec: epoch length (each epoch moves up to ell cards).
    #[arg(long, default_value_t = 2)]
    ell: usize,
    /// Unordered codec: number of back-to-back epochs starting at k1.
    #[arg(long, default_value_t = 2)]
    epochs: usize,
    /// Unordered codec: the epoch whose reasonable guesses are used (1-based).
    #[arg(long, default_value_t = 1)]
    epoch: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let out = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Params(a) => params(a),
        Command::CodecRoundtrip(a) => codec_roundtrip(a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(Error::ParamError(e.to_string()))
    }
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let guesser = a.guesser.spec()?;
    let order = match (&a.arrangements, &a.order) {
        (Some(path), _) => Some(StaticOrder::Explicit(load_arrangements(path)?)),
        (None, Some(name)) => Some(StaticOrder::parse(name)?),
        (None, None) => None,
    };
    let dealer = DealerSpec::from_registry(&a.dealer, a.guesser.m, order)?;
    let config = ExperimentConfig {
        guesser,
        dealer,
        n: a.n,
        m: a.budget,
        trials: a.trials,
        master_seed: a.seed,
        strict_memory: a.strict,
    };
    let r = monte_carlo(&config)?;
    let mut o = io::stdout().lock();
    writeln!(o, "guesser          {}", config.guesser.name())?;
    writeln!(o, "dealer           {}", config.dealer.name())?;
    writeln!(o, "n                {}", config.n)?;
    writeln!(o, "trials           {}", r.trials)?;
    writeln!(o, "declared bits    {}", r.declared_bits)?;
    if a.strict {
        writeln!(o, "peak state bits  {}", r.peak_state_bits)?;
    }
    writeln!(o, "mean_correct     {:.4} ± {:.4}", r.mean_correct, r.stderr_correct)?;
    writeln!(o, "mean_reasonable  {:.4} ± {:.4}", r.mean_reasonable, r.stderr_reasonable)?;
    if let Some((name, v)) = theory_for(&config.guesser, &config.dealer, config.n) {
        writeln!(o, "theory           {name} = {v:.4}")?;
    }
    if let Some(rate) = r.recovery_rate() {
        writeln!(o, "recovery rate    {rate:.4}")?;
    }
    if !r.epochs.is_empty() {
        writeln!(o, "epoch  k  ell  u  reasonable  correct")?;
        for (i, e) in r.epochs.iter().enumerate() {
            writeln!(
                o,
                "{}  {}  {}  {}  {:.4} ± {:.4}  {:.4} ± {:.4}",
                i + 1,
                e.params.k,
                e.params.ell,
                e.params.u,
                e.reasonable.mean,
                e.reasonable.stderr,
                e.correct.mean,
                e.correct.stderr
            )?;
        }
        if let Some(p) = r.epoch_phase_correct {
            writeln!(o, "epoch-phase correct  {:.4} ± {:.4}", p.mean, p.stderr)?;
        }
    }
    if let Some(path) = a.csv {
        let theory = theory_for(&config.guesser, &config.dealer, config.n);
        let row = SweepRow {
            guesser: config.guesser.name(),
            dealer: config.dealer.name(),
            n: config.n,
            m: a.guesser.m,
            delta: config.guesser.delta(),
            trials: r.trials,
            mean_correct: Some(r.mean_correct),
            stderr_correct: Some(r.stderr_correct),
            mean_reasonable: Some(r.mean_reasonable),
            stderr_reasonable: Some(r.stderr_reasonable),
            theory_name: theory.map(|t| t.0),
            theory_value: theory.map(|t| t.1),
            error: None,
        };
        write_sweep_csv(File::create(path)?, &[row])?;
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let cells = if let Some(path) = &a.grid {
        parse_grid(&std::fs::read_to_string(path)?)?
    } else {
        if a.ns.is_empty() || a.guessers.is_empty() || a.dealers.is_empty() {
            return Err(Failure::Usage("sweep needs --grid or at least one --n, --guesser and --dealer".into()));
        }
        let ms: Vec<Option<usize>> = if a.ms.is_empty() {
            vec![None]
        } else {
            a.ms.iter().copied().map(Some).collect()
        };
        let mut cells = Vec::new();
        for &n in &a.ns {
            for &m in &ms {
                for g in &a.guessers {
                    for d in &a.dealers {
                        cells.push(SweepCell {
                            n,
                            guesser: g.clone(),
                            dealer: d.clone(),
                            trials: a.trials,
                            m,
                            delta: None,
                            k: None,
                            card: None,
                            order: None,
                        });
                    }
                }
            }
        }
        cells
    };
    if cells.is_empty() {
        return Err(Failure::Usage("the grid is empty".into()));
    }
    let rows = run_sweep(&cells, a.seed);
    match a.out {
        Some(path) => write_sweep_csv(File::create(path)?, &rows)?,
        None => write_sweep_csv(io::stdout().lock(), &rows)?,
    }
    Ok(())
}

fn params(a: ParamsArgs) -> Result<(), Failure> {
    let mut o = io::stdout().lock();
    match a.dealer {
        ScheduleKind::Mtbe => {
            let m = a.m.ok_or_else(|| Failure::Usage("params --dealer mtbe needs --m".into()))?;
            let s = mtbe_params(a.n, m)?;
            writeln!(o, "n={} m={}", s.n, s.m)?;
            writeln!(o, "k1={}", s.k1)?;
            writeln!(o, "ell={}", s.ell)?;
            writeln!(o, "d={}", s.d)?;
            writeln!(o, "cutoff={}", s.final_cutoff)?;
            let starts: Vec<String> = s.starts.iter().map(|k| k.to_string()).collect();
            writeln!(o, "starts={}", starts.join(","))?;
        }
        ScheduleKind::Universal => {
            let s = universal_params(a.n);
            writeln!(o, "n={} log2n={:.4}", s.n, s.log_n)?;
            writeln!(o, "k1={}", s.k1)?;
            writeln!(o, "d_real={:.4}", s.d_real)?;
            writeln!(o, "tail={}", s.tail)?;
            if s.is_empty() {
                writeln!(o, "epochs=none (the dealer shuffles and reshuffles at the tail)")?;
            }
            for (i, e) in s.epochs.iter().enumerate() {
                writeln!(o, "epoch {}: k={} ell={} u={}", i + 1, e.k, e.ell, e.u)?;
            }
        }
    }
    Ok(())
}

fn codec_roundtrip(a: CodecArgs) -> Result<(), Failure> {
    use rand::seq::SliceRandom;

    let spec = GuesserSpec::from_registry(&a.guesser, GuesserParams { m: a.m, ..Default::default() })?;
    let schedule = match a.codec {
        CodecKind::Unordered => Some(Schedule::contiguous(a.n, a.k, a.ell, a.ell, a.epochs)?),
        CodecKind::Ordered => None,
    };
    let mut pass = 0u64;
    let mut fail = 0u64;
    let mut compressed = 0u64;
    let mut lengths: BTreeMap<usize, u64> = BTreeMap::new();
    let mut codes = Vec::new();
    for trial in 0..a.trials {
        let key = mix_words(&[a.seed, trial]);
        let gamma = Gamma::new(spec.clone(), mix_words(&[key, 1]), mix_words(&[key, 2]));
        let mut rng = chacha_from_key(mix_words(&[key, 3]));
        let ok = match &schedule {
            None => {
                let mut all: Vec<Card> = (1..=a.n as Card).collect();
                all.shuffle(&mut rng);
                let b = all.split_off(a.n - a.k.min(a.n));
                let code = encode_o(&b, &all, &gamma, a.alpha)?;
                let ok = decode_o(&code, &gamma, a.alpha, b.len(), a.n).is_ok_and(|d| d == b);
                codes.push(code);
                ok
            }
            Some(s) => {
                let rand = MinOrderRandomness::sample(a.n, a.k, &mut rng);
                let code = encode_u(&gamma, &rand, a.alpha, a.epoch, s)?;
                let d: Vec<Card> = rand.reserved.iter().collect();
                let ok = decode_u(&code, &gamma, &rand.pi, a.alpha, a.epoch, s).is_ok_and(|x| x == d);
                codes.push(code);
                ok
            }
        };
        let code = codes.last().expect("just pushed");
        if code[0] {
            compressed += 1;
        }
        *lengths.entry(code.len()).or_default() += 1;
        if ok {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    // Codes of one fixed gamma are prefix-free iff each indicator value has one length.
    let fixed = [false, true].iter().all(|&ind| {
        let mut lens = codes.iter().filter(|c| c[0] == ind).map(|c| c.len());
        lens.next().map_or(true, |l| lens.all(|x| x == l))
    });
    let mut o = io::stdout().lock();
    writeln!(o, "pass={pass} fail={fail}")?;
    writeln!(o, "indicator1={compressed} indicator0={}", a.trials - compressed)?;
    writeln!(o, "fixed length per indicator: {fixed}")?;
    writeln!(o, "length  count")?;
    for (len, count) in lengths {
        writeln!(o, "{len}  {count}")?;
    }
    if fail > 0 {
        return Err(Failure::Run(Error::MalformedCodeword(format!("{fail} round trips failed"))));
    }
    Ok(())
}
