use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod report;
mod ring;
mod suite;

use report::Report;

#[derive(Parser, Debug)]
#[command(name = "artinian", version, about = "Compressed level algebras: generation, invariants and Poincaré series checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a generic level algebra and write it as a ring file
    Gen(Opts),
    /// Invariants and colon-structure checks
    Analyze(Opts),
    /// Full verification suite
    Verify(Opts),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Field characteristic (defaults to 32003, or the ring file's prime)
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of variables
    #[arg(long)]
    e: Option<usize>,
    /// Socle degree
    #[arg(long)]
    s: Option<usize>,
    /// Type (socle dimension)
    #[arg(long)]
    c: Option<usize>,
    /// Series cutoff N
    #[arg(long, default_value_t = 8)]
    cutoff: usize,
    /// Degree cap for the Artinian check
    #[arg(long, default_value_t = artinian::gradedring::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Ring file to read instead of sampling
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Validated run parameters, echoed in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub prime: u64,
    pub seed: u64,
    pub e: Option<usize>,
    pub s: Option<usize>,
    pub c: Option<usize>,
    pub cutoff: usize,
    pub cap: usize,
    pub input: Option<String>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub prime_given: bool,
}

pub const DEFAULT_PRIME: u64 = 32003;

/// Input or usage problems; exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

impl RunConfig {
    fn new(command: &'static str, o: Opts) -> Result<Self, UsageError> {
        if o.input.is_some() && (o.e.is_some() || o.s.is_some() || o.c.is_some()) {
            return Err(UsageError("--in cannot be combined with --e/--s/--c".into()));
        }
        if o.input.is_none() && (o.e.is_none() || o.s.is_none() || o.c.is_none()) {
            return Err(UsageError("give either --in FILE or all of --e, --s, --c".into()));
        }
        if o.cap < 1 {
            return Err(UsageError("--cap must be positive".into()));
        }
        let prime = o.prime.unwrap_or(DEFAULT_PRIME);
        artinian::exactla::Fp::new(prime)?;
        Ok(RunConfig {
            command,
            prime,
            seed: o.seed,
            e: o.e,
            s: o.s,
            c: o.c,
            cutoff: o.cutoff,
            cap: o.cap,
            input: o.input.as_ref().map(|p| p.display().to_string()),
            format: o.format,
            out: o.out,
            prime_given: o.prime.is_some(),
        })
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), UsageError> {
    match &cfg.out {
        Some(p) => std::fs::write(p, text).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(cfg: &RunConfig, rep: &Report) -> Result<(), UsageError> {
    let text = match cfg.format {
        Format::Json => serde_json::to_string_pretty(rep)? + "\n",
        Format::Table => rep.table(),
    };
    emit(cfg, &text)
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    match cli.command {
        Command::Gen(o) => {
            if o.input.is_some() {
                return Err(UsageError("gen does not read a ring file".into()));
            }
            let cfg = RunConfig::new("gen", o)?;
            let text = ring::generate_text(&cfg)?;
            emit(&cfg, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze(o) => {
            let cfg = RunConfig::new("analyze", o)?;
            let (r, cfg) = ring::load(cfg)?;
            let rep = suite::analyze(&cfg, &r);
            render(&cfg, &rep)?;
            Ok(rep.exit_code())
        }
        Command::Verify(o) => {
            let cfg = RunConfig::new("verify", o)?;
            let (r, cfg) = ring::load(cfg)?;
            let rep = suite::verify(&cfg, &r);
            render(&cfg, &rep)?;
            Ok(rep.exit_code())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
