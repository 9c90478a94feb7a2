//! Command-line front end.
//!
//! Every number printed here comes straight from a library call; this module
//! only parses flags, dispatches and formats. Exit codes: 0 success, 2 flag or
//! domain error, 3 output write error, 4 unreadable or malformed input.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::audit::{self, AuditReport, DEFAULT_BINS, DEFAULT_SHIFT_GRID};
use crate::curve::{compare, CurveTable};
use crate::dist::{Draw, PAlphaDist};
use crate::error::DomainError;
use crate::fmt::{fmt_num, round_sig};
use crate::gaussian::{calibrate_gaussian, Convention, GaussianBaseline};
use crate::optimal::{optimal_alpha_ln, optimal_ln};
use crate::seeded_rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WRITE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "zdp", version, about = "Optimal (0, delta)-DP noise: optimize, sample, audit, compare")]
pub struct Cli {
    /// Structured output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal atom and minimum |x|^n cost.
    Optimal(OptimalArgs),
    /// Draw noise samples, one per line.
    Sample(SampleArgs),
    /// Optimal versus Gaussian cost at one delta.
    Compare(CompareArgs),
    /// Ratio curve over a delta grid, as CSV.
    Curve(CurveArgs),
    /// Estimate the privacy leakage of a noise sampler.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct OptimalArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sensitivity: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mechanism {
    Palpha,
    Gaussian,
}

/// Flags describing a built-in noise mechanism.
#[derive(Debug, Args)]
pub struct MechanismArgs {
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub sensitivity: f64,
    /// Atom at the origin (palpha); defaults to 0.
    #[arg(long, conflicts_with = "optimal")]
    pub alpha: Option<f64>,
    /// Use the optimal atom for the |x|^n cost (palpha).
    #[arg(long)]
    pub optimal: bool,
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    /// Gaussian standard deviation; defaults to sensitivity / (2 delta).
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent stream index under the same seed.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum, default_value_t = Mechanism::Palpha)]
    pub mechanism: Mechanism,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[command(flatten)]
    pub mech: MechanismArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sensitivity: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    #[arg(long, value_enum, default_value_t = Convention::PaperSigma)]
    pub convention: Convention,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sensitivity: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 0.99)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Convention::PaperSigma)]
    pub convention: Convention,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "mechanism"])))]
pub struct AuditArgs {
    /// File of samples, one real per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Audit a built-in mechanism instead of a sample file.
    #[arg(long, value_enum)]
    pub mechanism: Option<Mechanism>,
    /// Report the exact leakage of the built-in mechanism instead of sampling.
    #[arg(long, requires = "mechanism")]
    pub analytic: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub count: usize,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,
    #[arg(long, default_value_t = DEFAULT_SHIFT_GRID)]
    pub shifts: usize,
    #[command(flatten)]
    pub mech: MechanismArgs,
}

/// A failed command: exit code plus message for stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(msg: impl ToString) -> Self {
        CliError { code: EXIT_USAGE, message: msg.to_string() }
    }

    fn write(e: impl ToString) -> Self {
        CliError { code: EXIT_WRITE, message: format!("write error: {}", e.to_string()) }
    }

    fn input(msg: impl ToString) -> Self {
        CliError { code: EXIT_INPUT, message: msg.to_string() }
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::usage(e)
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Optimal(a) => cmd_optimal(a, cli.format, out),
        Command::Sample(a) => cmd_sample(a, out),
        Command::Compare(a) => cmd_compare(a, cli.format, out),
        Command::Curve(a) => cmd_curve(a, out),
        Command::Audit(a) => cmd_audit(a, cli.format, out),
    }
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

/// Emits `fields` as a JSON object, a one-row CSV, or aligned `key value` text.
fn emit_record(fields: &[(&str, Value)], format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let cell = |v: &Value| match v {
        Value::Number(n) => n.as_f64().map(fmt_num).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match format {
        Format::Json => {
            let map: Map<String, Value> = fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            writeln!(out, "{}", Value::Object(map)).map_err(CliError::write)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(fields.iter().map(|(k, _)| *k)).map_err(CliError::write)?;
            w.write_record(fields.iter().map(|(_, v)| cell(v))).map_err(CliError::write)?;
            w.flush().map_err(CliError::write)
        }
        Format::Text => {
            let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in fields {
                writeln!(out, "{k:<width$}  {}", cell(v)).map_err(CliError::write)?;
            }
            Ok(())
        }
    }
}

pub fn cmd_optimal(a: &OptimalArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let r = optimal_ln(a.delta, a.sensitivity, a.n)?;
    emit_record(
        &[
            ("delta", num(a.delta)),
            ("sensitivity", num(a.sensitivity)),
            ("n", num(a.n)),
            ("alpha_star", num(r.alpha_star)),
            ("half_width", num(r.dist.half_width())),
            ("density", num(r.dist.density())),
            ("min_cost", num(r.min_cost)),
        ],
        format,
        out,
    )
}

/// A built-in noise source resolved from flags.
#[derive(Debug, Clone, Copy)]
pub enum NoiseSource {
    PAlpha(PAlphaDist),
    Gaussian(GaussianBaseline),
}

impl NoiseSource {
    pub fn from_flags(mechanism: Mechanism, m: &MechanismArgs) -> Result<Self, CliError> {
        match mechanism {
            Mechanism::Palpha => {
                let delta = m.delta.ok_or_else(|| CliError::usage("--delta is required for the palpha mechanism"))?;
                let alpha = if m.optimal { optimal_alpha_ln(delta, m.n)? } else { m.alpha.unwrap_or(0.0) };
                Ok(NoiseSource::PAlpha(PAlphaDist::new(delta, m.sensitivity, alpha)?))
            }
            Mechanism::Gaussian => {
                let g = match (m.sigma, m.delta) {
                    (Some(sigma), _) => GaussianBaseline::with_sigma(sigma, m.sensitivity)?,
                    (None, Some(delta)) => calibrate_gaussian(delta, m.sensitivity)?,
                    (None, None) => return Err(CliError::usage("--sigma or --delta is required for the gaussian mechanism")),
                };
                Ok(NoiseSource::Gaussian(g))
            }
        }
    }

    /// `count` tagged draws from stream `(seed, stream)`.
    pub fn draws(&self, count: usize, seed: u64, stream: u64) -> Vec<Draw> {
        let mut rng = seeded_rng(seed, stream);
        match self {
            NoiseSource::PAlpha(d) => (0..count).map(|_| d.sample_tagged(&mut rng)).collect(),
            NoiseSource::Gaussian(g) => (0..count).map(|_| Draw::Continuous(g.sample(&mut rng))).collect(),
        }
    }
}

pub fn cmd_sample(a: &SampleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let source = NoiseSource::from_flags(a.mechanism, &a.mech)?;
    let mut w = BufWriter::new(out);
    for d in source.draws(a.count, a.mech.seed, a.mech.stream) {
        writeln!(w, "{}", fmt_num(d.value())).map_err(CliError::write)?;
    }
    w.flush().map_err(CliError::write)
}

pub fn cmd_compare(a: &CompareArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let c = compare(a.delta, a.sensitivity, a.n, a.convention)?;
    let convention = match c.convention {
        Convention::PaperSigma => "sigma",
        Convention::ExactMoment => "exact",
    };
    let write = |e: io::Error| CliError::write(e);
    match format {
        Format::Json => {
            let v = json!({
                "delta": num(c.delta),
                "sensitivity": num(c.sensitivity),
                "n": num(c.n),
                "convention": convention,
                "rows": [
                    {"mechanism": "gaussian", "cost": num(c.gaussian_cost)},
                    {"mechanism": "optimal", "cost": num(c.optimal_cost)},
                ],
                "ratio": num(c.ratio),
            });
            writeln!(out, "{v}").map_err(write)
        }
        Format::Csv => {
            writeln!(out, "mechanism,cost,ratio").map_err(write)?;
            writeln!(out, "gaussian,{},1", fmt_num(c.gaussian_cost)).map_err(write)?;
            writeln!(out, "optimal,{},{}", fmt_num(c.optimal_cost), fmt_num(c.ratio)).map_err(write)
        }
        Format::Text => {
            writeln!(out, "mechanism  cost").map_err(write)?;
            writeln!(out, "gaussian   {}", fmt_num(c.gaussian_cost)).map_err(write)?;
            writeln!(out, "optimal    {}", fmt_num(c.optimal_cost)).map_err(write)?;
            writeln!(out, "ratio      {}", fmt_num(c.ratio)).map_err(write)
        }
    }
}

pub fn cmd_curve(a: &CurveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = CurveTable::build(a.n, a.sensitivity, a.delta_min, a.delta_max, a.step, a.convention)?;
    match &a.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::write(format!("{}: {e}", path.display())))?;
            table.write_csv(BufWriter::new(file)).map_err(CliError::write)
        }
        None => table.write_csv(out).map_err(CliError::write),
    }
}

/// Reads one real per line. Blank lines are skipped.
pub fn read_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let mut samples = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::input(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let x: f64 = text
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| CliError::input(format!("{}:{}: not a finite real: {text:?}", path.display(), i + 1)))?;
        samples.push(x);
    }
    if samples.is_empty() {
        return Err(CliError::input(format!("{}: no samples", path.display())));
    }
    Ok(samples)
}

pub fn audit_report(a: &AuditArgs) -> Result<AuditReport, CliError> {
    let sensitivity = a.mech.sensitivity;
    if let Some(path) = &a.input {
        let samples = read_samples(path)?;
        return Ok(audit::empirical_delta(&samples, sensitivity, a.bins, a.shifts)?);
    }
    let mechanism = a.mechanism.ok_or_else(|| CliError::usage("--input or --mechanism is required"))?;
    let source = NoiseSource::from_flags(mechanism, &a.mech)?;
    if a.analytic {
        return Ok(match source {
            NoiseSource::PAlpha(d) => audit::analytic_delta_palpha(&d),
            NoiseSource::Gaussian(g) => audit::analytic_delta_gaussian(g.sigma(), g.sensitivity())?,
        });
    }
    let draws = source.draws(a.count, a.mech.seed, a.mech.stream);
    Ok(audit::empirical_delta_draws(&draws, sensitivity, a.bins, a.shifts)?)
}

pub fn cmd_audit(a: &AuditArgs, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let r = audit_report(a)?;
    let method = serde_json::to_value(r.method).unwrap_or(Value::Null);
    emit_record(
        &[
            ("delta_hat", num(r.delta_hat)),
            ("worst_shift", num(r.worst_shift)),
            ("method", method),
            ("sample_count", json!(r.sample_count)),
        ],
        format,
        out,
    )
}
