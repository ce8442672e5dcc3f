use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use goodtrace_cli::{
    append_to_ledger, parse_batch, run_query, CliError, Kind, Options, Payload, Query,
    VerdictRecord,
};

/// Exact decision procedures for goodness of traces on dimension groups.
///
/// Each subcommand reads a JSON payload from FILE, or from standard input
/// when FILE is absent or `-`. Exit status is 0 whenever a verdict was
/// computed, whether true or false; 1 on a computation error, 2 on malformed
/// input, 3 when an oracle cross-check disagrees.
#[derive(Parser)]
#[command(name = "goodtrace", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Also run the brute-force oracle and report agreement.
    #[arg(long, global = true)]
    oracle: bool,
    /// Largest boost power for fitting.
    #[arg(long = "nmax", global = true, value_name = "INT")]
    n_max: Option<u32>,
    /// Search bound for the oracle (scaling exponent, lifting box, or pair count).
    #[arg(long, global = true, value_name = "INT")]
    bound: Option<u32>,
    /// Append every verdict record to this JSONL file.
    #[arg(long, global = true, value_name = "PATH")]
    ledger: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    /// One JSON verdict record per line.
    Record,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a trace on R_P at an algebraic point, one variable.
    Trace1d { file: Option<PathBuf> },
    /// Classify a trace on R_P at a rational point.
    Tracerat { file: Option<PathBuf> },
    /// Search for a fitted candidate among boosted vanishing polynomials.
    Fit { file: Option<PathBuf> },
    /// Order-unit goodness of a trace on a simplicial group.
    Simp { file: Option<PathBuf> },
    /// Order-unit goodness of a strict direct sum of subgroups of R.
    Dsum { file: Option<PathBuf> },
    /// Decide whether a finite subset of a simplex is good.
    Splx { file: Option<PathBuf> },
    /// Newton polytope of a Laurent polynomial.
    Poly { file: Option<PathBuf> },
    /// Run full queries, one JSON object per line.
    Batch { file: Option<PathBuf> },
}

enum Failure {
    Compute(String),
    Input(String),
    Disagreement,
    /// Already printed; carries the exit code.
    Reported(u8),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Input(_) => 2,
            Failure::Disagreement => 3,
            Failure::Reported(code) => *code,
        }
    }
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        match e {
            CliError::Compute(_) => Failure::Compute(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read_input(file: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match file {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn options(flags: &Flags, base: Options) -> Options {
    Options {
        n_max: flags.n_max.or(base.n_max),
        bound: flags.bound.or(base.bound),
        oracle: flags.oracle || base.oracle,
    }
}

fn emit(record: &VerdictRecord, format: Format) {
    match format {
        Format::Human => print!("{}", record.human()),
        Format::Record => println!("{}", record.to_line()),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let (kind, file) = match &cli.command {
        Command::Trace1d { file } => (Some(Kind::Trace1d), file),
        Command::Tracerat { file } => (Some(Kind::TraceRational), file),
        Command::Fit { file } => (Some(Kind::Fitting), file),
        Command::Simp { file } => (Some(Kind::Simplicial), file),
        Command::Dsum { file } => (Some(Kind::DirectSum), file),
        Command::Splx { file } => (Some(Kind::Simplex), file),
        Command::Poly { file } => (Some(Kind::PolytopeInfo), file),
        Command::Batch { file } => (None, file),
    };
    let text = read_input(file.as_deref())?;
    let queries = match kind {
        Some(kind) => {
            let value: serde_json::Value = serde_json::from_str(&text).map_err(CliError::from)?;
            let payload = Payload::parse(kind, &value)?;
            vec![Query::new(payload, options(&cli.flags, Options::default()))]
        }
        None => parse_batch(&text)?
            .into_iter()
            .map(|q| Query {
                options: options(&cli.flags, q.options.clone()),
                ..q
            })
            .collect(),
    };

    let mut records = Vec::new();
    let mut first_error = None;
    for q in &queries {
        match run_query(q) {
            Ok(r) => {
                emit(&r, cli.flags.format);
                records.push(r);
            }
            Err(e) => {
                eprintln!("error ({}): {e}", q.kind());
                first_error.get_or_insert(Failure::Reported(Failure::from(e).code()));
            }
        }
    }
    if let Some(path) = &cli.flags.ledger {
        append_to_ledger(path, &records)?;
    }
    if let Some(f) = first_error {
        return Err(f);
    }
    if records.iter().any(|r| !r.oracle_agrees()) {
        return Err(Failure::Disagreement);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Compute(m) | Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Disagreement => eprintln!("error: oracle disagreement"),
                Failure::Reported(_) => {}
            }
            ExitCode::from(f.code())
        }
    }
}
