//! Command-line surface of `bdht`: exponent curves, Stein sweeps, tradeoff
//! curves, simulations and self-validation, written as CSV or JSON lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use bdht::regions::{
    baseline_pair, stein_row, theorem1_pair, theorem2_pair, tradeoff_curve, unconstrained_pair, HypothesisPair,
    Scheme, SchemeParams, SteinSearch,
};
use bdht::simkit::{
    estimate_errors, nested_for_params, run_korner_marton, run_one_sided, SimConfig, SimScheme, TrialRecord,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod table;
pub mod validate;

pub use table::{Cell, Format, Table};
pub use validate::{cmd_validate, Level, ValidationReport};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments; exit status 2.
    #[error("usage: {0}")]
    Usage(String),
    /// A computation failed; exit status 1.
    #[error("{0}")]
    Compute(bdht::Error),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl From<bdht::Error> for CliError {
    fn from(e: bdht::Error) -> Self {
        match e {
            bdht::Error::OutOfRange { .. } | bdht::Error::InvalidThreshold { .. } | bdht::Error::InvalidParams(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Compute(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "bdht", version, about = "Error exponents of distributed binary hypothesis testing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exponent pairs of each scheme at one operating point.
    Exponents(ExponentsArgs),
    /// Stein exponents over a sweep of p0.
    Stein(SteinArgs),
    /// Exponent tradeoff curves.
    Tradeoff(TradeoffArgs),
    /// Monte Carlo simulation of the coded tests.
    Simulate(SimulateArgs),
    /// Run the built-in validation suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Stein sweep, R = 0.3, p1 = 0.25.
    Fig2a,
    /// Stein sweep, R = 0.3, p1 = 0.1.
    Fig2b,
    /// Tradeoff, R = 0.3, p0 = 0.01, p1 = 0.25.
    Fig3a,
    /// Tradeoff, R = 0.3, p0 = 0.01, p1 = 0.1.
    Fig3b,
}

impl Preset {
    /// `(p0, p1, rate)`; `p0` is `None` for the sweeps.
    pub fn values(self) -> (Option<f64>, f64, f64) {
        match self {
            Preset::Fig2a => (None, 0.25, 0.3),
            Preset::Fig2b => (None, 0.1, 0.3),
            Preset::Fig3a => (Some(0.01), 0.25, 0.3),
            Preset::Fig3b => (Some(0.01), 0.1, 0.3),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub rate: Option<f64>,
    /// Named parameter set; explicit flags win.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

impl SourceArgs {
    fn resolve(&self) -> (Option<f64>, Option<f64>, Option<f64>) {
        let (p0, p1, rate) = match self.preset {
            Some(p) => {
                let (p0, p1, r) = p.values();
                (p0, Some(p1), Some(r))
            }
            None => (None, None, None),
        };
        (self.p0.or(p0), self.p1.or(p1), self.rate.or(rate))
    }
}

fn required(value: Option<f64>, flag: &str) -> CliResult<f64> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

#[derive(Debug, Clone, Args)]
pub struct ExponentsArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub threshold: f64,
    /// Quantization noise level of the one-sided scheme.
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    #[arg(long = "scheme", value_enum)]
    pub schemes: Vec<SchemeArg>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SteinArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Sweep start when no --p0 is given.
    #[arg(long, default_value_t = 0.005)]
    pub p0_from: f64,
    /// Sweep end; defaults to p1 - 0.005.
    #[arg(long)]
    pub p0_to: Option<f64>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(1..))]
    pub resolution: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Unconstrained,
    Baseline,
    Theorem1,
    Theorem2,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Unconstrained => Scheme::Unconstrained,
            SchemeArg::Baseline => Scheme::Baseline,
            SchemeArg::Theorem1 => Scheme::Theorem1,
            SchemeArg::Theorem2 => Scheme::Theorem2,
        }
    }
}

fn schemes_or_all(schemes: &[SchemeArg]) -> Vec<Scheme> {
    if schemes.is_empty() {
        Scheme::ALL.to_vec()
    } else {
        schemes.iter().map(|&s| s.into()).collect()
    }
}

#[derive(Debug, Clone, Args)]
pub struct TradeoffArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Repeat to select several; all schemes when absent.
    #[arg(long = "scheme", value_enum)]
    pub schemes: Vec<SchemeArg>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u32).range(2..))]
    pub resolution: u32,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimSchemeArg {
    OneSided,
    KornerMarton,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0.0)]
    pub a: f64,
    /// Blocklengths; repeat for several.
    #[arg(long = "n", default_values_t = [15usize, 23, 31])]
    pub n: Vec<usize>,
    /// Trials per hypothesis.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Seed of the random code construction.
    #[arg(long, default_value_t = 1)]
    pub code_seed: u64,
    #[arg(long, value_enum, default_value = "one-sided")]
    pub scheme: SimSchemeArg,
    /// Also write every trial as a JSON line to this file.
    #[arg(long)]
    pub records: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "fast")]
    pub level: Level,
    /// Perturb the measured values of one suite, to check that failures are
    /// reported.
    #[arg(long)]
    pub inject: Option<String>,
    #[command(flatten)]
    pub out: OutputArgs,
}

fn hypotheses(p0: f64, p1: f64) -> CliResult<HypothesisPair> {
    if p0.partial_cmp(&p1) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage(format!("need p0 < p1, got p0 = {p0}, p1 = {p1}")));
    }
    Ok(HypothesisPair::new(p0, p1)?)
}

pub fn cmd_exponents(args: &ExponentsArgs) -> CliResult<Table> {
    let (p0, p1, rate) = args.source.resolve();
    let h = hypotheses(required(p0, "p0")?, required(p1, "p1")?)?;
    let rate = required(rate, "rate")?;
    let theta = args.threshold;
    let mut t = Table::new("exponents", &["scheme", "p0", "p1", "rate", "a", "theta", "r_bin", "e0", "e1"]);
    for scheme in schemes_or_all(&args.schemes) {
        let a = if scheme == Scheme::Theorem1 { args.a } else { 0.0 };
        let pair = match scheme {
            Scheme::Unconstrained => unconstrained_pair(&h, theta)?,
            Scheme::Baseline => baseline_pair(&h, rate, theta)?,
            Scheme::Theorem1 => theorem1_pair(&h, &SchemeParams::new(a, theta, rate))?,
            Scheme::Theorem2 => theorem2_pair(&h, rate, theta)?,
        };
        let r_bin = match scheme {
            Scheme::Theorem1 | Scheme::Theorem2 => SchemeParams::new(a, theta, rate).r_bin(),
            _ => f64::NAN,
        };
        t.push(vec![
            scheme.name().into(),
            h.p0.into(),
            h.p1.into(),
            rate.into(),
            a.into(),
            theta.into(),
            r_bin.into(),
            pair.e0.into(),
            pair.e1.into(),
        ]);
    }
    Ok(t)
}

pub fn cmd_stein(args: &SteinArgs) -> CliResult<Table> {
    let (p0, p1, rate) = args.source.resolve();
    let p1 = required(p1, "p1")?;
    let rate = required(rate, "rate")?;
    let sweep: Vec<f64> = match p0 {
        Some(p0) => vec![p0],
        None => {
            let to = args.p0_to.unwrap_or(p1 - 0.005);
            let k = args.resolution as usize;
            if k == 1 {
                vec![args.p0_from]
            } else {
                (0..k)
                    .map(|i| args.p0_from + (to - args.p0_from) * i as f64 / (k - 1) as f64)
                    .collect()
            }
        }
    };
    if let Some(&bad) = sweep.iter().find(|&&p0| !(p0 > 0.0 && p0 < p1 && p1 <= 0.5)) {
        return Err(CliError::Usage(format!(
            "the sweep needs 0 < p0 < p1 <= 1/2, got p0 = {bad}, p1 = {p1}"
        )));
    }
    let mut t = Table::new(
        "stein",
        &[
            "p0",
            "p1",
            "rate",
            "unconstrained",
            "theorem1",
            "prior_best",
            "theorem1_no_quantization",
            "sigma_han",
            "sigma_sha",
            "sigma_ac",
            "baseline",
            "theorem1_plain",
        ],
    );
    for p0 in sweep {
        let r = stein_row(&hypotheses(p0, p1)?, rate, SteinSearch::default());
        t.push(
            [
                r.p0,
                r.p1,
                r.rate,
                r.unconstrained,
                r.theorem1,
                r.prior_best,
                r.theorem1_no_quantization,
                r.sigma_han,
                r.sigma_sha,
                r.sigma_ac,
                r.baseline,
                r.theorem1_plain,
            ]
            .into_iter()
            .map(Cell::from)
            .collect(),
        );
    }
    Ok(t)
}

pub fn cmd_tradeoff(args: &TradeoffArgs) -> CliResult<Table> {
    let (p0, p1, rate) = args.source.resolve();
    let h = hypotheses(required(p0, "p0")?, required(p1, "p1")?)?;
    let rate = required(rate, "rate")?;
    let mut t = Table::new("tradeoff", &["scheme", "e0", "e1", "a", "theta", "time_share"]);
    for scheme in schemes_or_all(&args.schemes) {
        let curve = tradeoff_curve(scheme, &h, rate, args.resolution as usize)?;
        for p in curve.points {
            t.push(vec![
                scheme.name().into(),
                p.pair.e0.into(),
                p.pair.e1.into(),
                p.params.a.into(),
                p.params.theta.into(),
                p.params.time_share.into(),
            ]);
        }
    }
    Ok(t)
}

/// Aggregate table plus, optionally, every trial record.
pub fn cmd_simulate(args: &SimulateArgs) -> CliResult<(Table, Vec<(usize, TrialRecord)>)> {
    let (p0, p1, rate) = args.source.resolve();
    let h = HypothesisPair::new(required(p0, "p0")?, required(p1, "p1")?)?;
    let rate = required(rate, "rate")?;
    let params = SchemeParams::new(args.a, args.threshold, rate);
    let scheme = match args.scheme {
        SimSchemeArg::OneSided => SimScheme::OneSided,
        SimSchemeArg::KornerMarton => SimScheme::KornerMarton,
    };
    let mut t = Table::new(
        "simulate",
        &[
            "scheme",
            "n",
            "trials",
            "seed",
            "eps0",
            "eps0_lo",
            "eps0_hi",
            "eps1",
            "eps1_lo",
            "eps1_hi",
            "exponent0",
            "exponent1",
            "bin_error_rate0",
            "bin_error_rate1",
        ],
    );
    let mut all = Vec::new();
    for &n in &args.n {
        let cfg = SimConfig {
            n,
            trials: args.trials as usize,
            seed: args.seed,
            h,
            params,
            scheme,
        };
        cfg.validate()?;
        let nested = nested_for_params(n, &params, args.code_seed)?;
        let records = match scheme {
            SimScheme::OneSided => run_one_sided(&cfg, &nested)?,
            SimScheme::KornerMarton => run_korner_marton(&cfg, &nested.coarse)?,
        };
        let e = estimate_errors(&records)?;
        t.push(vec![
            match scheme {
                SimScheme::OneSided => "one_sided",
                SimScheme::KornerMarton => "korner_marton",
            }
            .into(),
            n.into(),
            args.trials.into(),
            args.seed.into(),
            e.eps0.estimate.into(),
            e.eps0.lower.into(),
            e.eps0.upper.into(),
            e.eps1.estimate.into(),
            e.eps1.lower.into(),
            e.eps1.upper.into(),
            e.eps0.exponent(n).into(),
            e.eps1.exponent(n).into(),
            e.eps0.bin_error_rate().into(),
            e.eps1.bin_error_rate().into(),
        ]);
        if args.records.is_some() {
            all.extend(records.into_iter().map(|r| (n, r)));
        }
    }
    Ok((t, all))
}

fn open_output(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(table: &Table, out: &OutputArgs) -> CliResult<()> {
    let mut w = open_output(&out.output)?;
    table.write(&mut w, out.format)?;
    w.flush()?;
    Ok(())
}

fn write_records(path: &PathBuf, records: &[(usize, TrialRecord)]) -> CliResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (n, r) in records {
        let mut v = serde_json::to_value(r).map_err(|e| CliError::Io(e.into()))?;
        if let Some(obj) = v.as_object_mut() {
            obj.insert("n".into(), (*n).into());
        }
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Run one parsed command, writing its output.
pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Exponents(a) => emit(&cmd_exponents(a)?, &a.out),
        Command::Stein(a) => emit(&cmd_stein(a)?, &a.out),
        Command::Tradeoff(a) => emit(&cmd_tradeoff(a)?, &a.out),
        Command::Simulate(a) => {
            let (table, records) = cmd_simulate(a)?;
            if let Some(path) = &a.records {
                write_records(path, &records)?;
            }
            emit(&table, &a.out)
        }
        Command::Validate(a) => {
            let report = cmd_validate(a.level, a.inject.as_deref())?;
            emit(&report.table(), &a.out)?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Validation(report.failures().join(", ")))
            }
        }
    }
}
