//! Selecting a distribution of {log_b X} from the command line.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use sigfrac::fracpart::{Benford, FracLogDistribution, ParetoParams, TabulatedFracLog};
use sigfrac::Error;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Benford,
    Pareto,
    /// Piecewise-linear cdf of {log_b X} read from `--cdf-table`.
    Table,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Defaults to pareto when --shape is given, else benford.
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(short = 'b', long = "base", default_value_t = 10)]
    pub base: u32,
    /// Pareto shape s.
    #[arg(short = 's', long = "shape", allow_negative_numbers = true)]
    pub shape: Option<f64>,
    /// Pareto offset {log_b x_m}.
    #[arg(long, conflicts_with = "xmin", allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Pareto scale x_m.
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: Option<f64>,
    /// File of (y, F(y)) knots, one pair per line.
    #[arg(long, value_name = "PATH")]
    pub cdf_table: Option<PathBuf>,
}

pub enum Model {
    Benford(Benford),
    Pareto(ParetoParams),
    Table(TabulatedFracLog),
}

impl Model {
    pub fn distribution(&self) -> &dyn FracLogDistribution {
        match self {
            Model::Benford(d) => d,
            Model::Pareto(p) => p,
            Model::Table(t) => t,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Model::Benford(_) => "benford",
            Model::Pareto(_) => "pareto",
            Model::Table(_) => "table",
        }
    }

    /// Parameters worth echoing in output metadata.
    pub fn describe(&self) -> Vec<(&'static str, f64)> {
        match self {
            Model::Pareto(p) => vec![("shape", p.s()), ("rho", p.rho()), ("xmin", p.x_m())],
            _ => Vec::new(),
        }
    }
}

impl ModelArgs {
    pub fn kind(&self) -> ModelKind {
        self.model.unwrap_or(if self.shape.is_some() {
            ModelKind::Pareto
        } else {
            ModelKind::Benford
        })
    }

    pub fn build(&self) -> Result<Model, CliError> {
        let kind = self.kind();
        if kind != ModelKind::Pareto && (self.shape.is_some() || self.rho.is_some() || self.xmin.is_some()) {
            return Err(CliError::Usage("--shape, --rho and --xmin apply to the pareto model only".into()));
        }
        if kind != ModelKind::Table && self.cdf_table.is_some() {
            return Err(CliError::Usage("--cdf-table applies to the table model only".into()));
        }
        match kind {
            ModelKind::Benford => Ok(Model::Benford(Benford::new(self.base)?)),
            ModelKind::Pareto => {
                let s = self
                    .shape
                    .ok_or_else(|| CliError::Usage("the pareto model needs --shape".into()))?;
                let p = match (self.rho, self.xmin) {
                    (Some(rho), None) => ParetoParams::from_rho(s, rho, self.base)?,
                    (None, Some(x_m)) => ParetoParams::from_xmin(s, x_m, self.base)?,
                    _ => return Err(CliError::Usage("the pareto model needs --rho or --xmin".into())),
                };
                Ok(Model::Pareto(p))
            }
            ModelKind::Table => {
                let path = self
                    .cdf_table
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("the table model needs --cdf-table".into()))?;
                let knots = read_knots(path)?;
                Ok(Model::Table(TabulatedFracLog::new(self.base, &knots)?))
            }
        }
    }
}

fn read_knots(path: &PathBuf) -> Result<Vec<(f64, f64)>, CliError> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut knots = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(Error::from)?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<f64> = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .map(|f| f.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        match fields[..] {
            [y, f] => knots.push((y, f)),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected two numbers, found {}", fields.len()),
                }
                .into())
            }
        }
    }
    if knots.is_empty() {
        return Err(Error::InsufficientData(format!("{}: no cdf knots", path.display())).into());
    }
    Ok(knots)
}
