//! Tables of significand, digit and continued-fraction coefficient laws, and
//! conformance tests of datasets against them.

mod commands;
mod model;
mod table;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{AnalyzeArgs, CfArgs, DigitArgs, FitArgs, SampleArgs, SignificandArgs};
use table::{Cell, Table};

#[derive(Parser, Debug)]
#[command(name = "sigfrac", version, about)]
struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Tsv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pmf of the k-digit integer significand.
    PmfSignificand(SignificandArgs),
    /// Pmf of the j-th digit.
    PmfDigit(DigitArgs),
    /// Pmf of the first one or two continued-fraction coefficients of {log_b X}.
    PmfCf(CfArgs),
    /// Chi-square test of a dataset against a model.
    Analyze(AnalyzeArgs),
    /// Draw a seeded sample.
    Sample(SampleArgs),
    /// Maximum-likelihood Pareto fit.
    FitPareto(FitArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
        }
    }
}

impl From<sigfrac::Error> for CliError {
    fn from(e: sigfrac::Error) -> Self {
        use sigfrac::Error::*;
        let msg = e.to_string();
        match e {
            Domain { .. } | InvalidArgument(_) | Unsupported(_) | TooLarge(..) => CliError::Usage(msg),
            Io(_) | Parse { .. } | InsufficientData(_) | DegenerateSample(_) => CliError::Data(msg),
        }
    }
}

/// Probability columns must be finite and sum to one.
fn check(t: &Table) -> Result<(), CliError> {
    for name in ["probability", "expected"] {
        let Some(col) = t.column(name) else { continue };
        let mut sum = 0.0;
        for c in col {
            match c {
                Cell::Float(p) if p.is_finite() && *p >= 0.0 => sum += p,
                other => return Err(CliError::Numeric(format!("{name} column holds {other:?}"))),
            }
        }
        if (sum - 1.0).abs() > 1e-6 {
            return Err(CliError::Numeric(format!("{name} column sums to {sum}")));
        }
    }
    Ok(())
}

/// Writes to stdout; a closed pipe is not an error.
pub(crate) fn emit_with(f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut w = io::BufWriter::new(stdout.lock());
    match f(&mut w).and_then(|_| w.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(sigfrac::Error::from(e).into()),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let table = match &cli.command {
        Command::PmfSignificand(a) => commands::pmf_significand(a)?,
        Command::PmfDigit(a) => commands::pmf_digit(a)?,
        Command::PmfCf(a) => commands::pmf_cf(a)?,
        Command::Analyze(a) => commands::analyze(a)?,
        Command::FitPareto(a) => commands::fit(a)?,
        Command::Sample(a) => return commands::sample(a, cli.format),
    };
    check(&table)?;
    let text = match cli.format {
        Format::Tsv => table.to_tsv(),
        Format::Json => table.to_json(),
    };
    emit_with(|w| w.write_all(text.as_bytes()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sigfrac: {e}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(ps: &[f64]) -> Table {
        let mut t = Table::new(&["a", "probability"]);
        for (i, &p) in ps.iter().enumerate() {
            t.push(vec![i.into(), p.into()]);
        }
        t
    }

    #[test]
    fn numeric_check() {
        assert!(check(&table(&[0.25, 0.75])).is_ok());
        assert_eq!(check(&table(&[0.25, 0.7])).unwrap_err().code(), 4);
        assert_eq!(check(&table(&[f64::NAN, 1.0])).unwrap_err().code(), 4);
        assert_eq!(check(&table(&[-0.5, 1.5])).unwrap_err().code(), 4);
    }

    #[test]
    fn error_classes() {
        let usage: CliError = sigfrac::Error::InvalidArgument("x".into()).into();
        let data: CliError = sigfrac::Error::DegenerateSample(3).into();
        assert_eq!((usage.code(), data.code()), (2, 3));
    }
}
