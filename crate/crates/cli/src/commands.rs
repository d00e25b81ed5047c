use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use sigfrac::contfrac::{blachman_table, gauss_kuzmin_table, CfBin, CfModel, CfTable, DEFAULT_A_MAX};
use sigfrac::empirical::{
    chi_square_test, empirical_cf_freqs, empirical_significand_freqs, fit_pareto, sample_benford, sample_pareto,
    Dataset, EmpiricalReport, DEFAULT_MIN_EXPECTED,
};
use sigfrac::fracpart::FracLogDistribution;
use sigfrac::significand::{
    asymptotic_pmf_approx, benford_digit_pmf, benford_pmf, general_digit_pmf, general_pmf, pareto_digit_pmf_table,
    pareto_pmf, DigitPmf, SignificandSpec,
};
use sigfrac::Error;

use crate::model::{Model, ModelArgs};
use crate::table::{Cell, Table};
use crate::{CliError, Format};

fn model_meta(t: &mut Table, m: &Model) {
    t.meta("model", m.name());
    t.meta("base", m.distribution().base());
    for (k, v) in m.describe() {
        t.meta(k, v);
    }
}

#[derive(Args, Debug)]
pub struct SignificandArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    /// Add the density-based approximation as a second column.
    #[arg(long)]
    pub asymptotic: bool,
    #[arg(long, value_enum, default_value_t = Approx::Exact)]
    pub approx: Approx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Approx {
    Exact,
    Asymptotic,
    Blachman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Law {
    GaussKuzmin,
}

pub fn pmf_significand(args: &SignificandArgs) -> Result<Table, CliError> {
    let asymptotic = match args.approx {
        Approx::Exact => args.asymptotic,
        Approx::Asymptotic => true,
        Approx::Blachman => {
            return Err(CliError::Usage("--approx blachman applies to pmf-cf only".into()));
        }
    };
    let m = args.model.build()?;
    let spec = SignificandSpec::new(args.model.base, args.k)?;
    let exact = match &m {
        Model::Benford(_) => benford_pmf(spec)?,
        Model::Pareto(p) => pareto_pmf(p, spec)?,
        Model::Table(t) => general_pmf(t, spec)?,
    };
    let mut t = if asymptotic {
        Table::new(&["a", "probability", "asymptotic"])
    } else {
        Table::new(&["a", "probability"])
    };
    model_meta(&mut t, &m);
    t.meta("k", args.k);
    if asymptotic {
        let approx = asymptotic_pmf_approx(m.distribution(), spec)?;
        t.meta("asymptotic_sum", approx.sum);
        for ((a, p), q) in exact.iter().zip(approx.values) {
            t.push(vec![a.into(), p.into(), q.into()]);
        }
    } else {
        for (a, p) in exact.iter() {
            t.push(vec![a.into(), p.into()]);
        }
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct DigitArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Digit position, 1 for the leading digit.
    #[arg(short = 'j', default_value_t = 1)]
    pub j: u32,
}

fn digit_pmf(m: &Model, j: u32) -> Result<DigitPmf, Error> {
    match m {
        Model::Benford(d) => benford_digit_pmf(d.base(), j),
        Model::Pareto(p) => pareto_digit_pmf_table(p, j),
        Model::Table(t) => general_digit_pmf(t, j),
    }
}

pub fn pmf_digit(args: &DigitArgs) -> Result<Table, CliError> {
    let m = args.model.build()?;
    let pmf = digit_pmf(&m, args.j)?;
    let mut t = Table::new(&["digit", "probability"]);
    model_meta(&mut t, &m);
    t.meta("j", args.j);
    for (a, p) in pmf.iter() {
        t.push(vec![a.into(), p.into()]);
    }
    Ok(t)
}

#[derive(Args, Debug)]
pub struct CfArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Number of leading coefficients, 1 or 2.
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    /// Largest tabulated coefficient; larger ones share a tail bin.
    #[arg(long, default_value_t = DEFAULT_A_MAX)]
    pub amax: u64,
    #[arg(long, value_enum, default_value_t = Approx::Exact)]
    pub approx: Approx,
    /// Emit a limiting law instead of a model.
    #[arg(long, value_enum, conflicts_with = "approx")]
    pub law: Option<Law>,
}

fn bin_cell(b: CfBin, a_max: u64) -> Cell {
    match b {
        CfBin::Value(a) => a.into(),
        CfBin::Tail => format!(">{a_max}").into(),
    }
}

fn cf_label(bins: &[CfBin], a_max: u64) -> String {
    bins.iter()
        .map(|&b| match b {
            CfBin::Value(a) => a.to_string(),
            CfBin::Tail => format!(">{a_max}"),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn pmf_cf(args: &CfArgs) -> Result<Table, CliError> {
    let model_free = args.law.is_some() || args.approx == Approx::Blachman;
    let m = if model_free {
        let a = &args.model;
        if a.model.is_some() || a.shape.is_some() || a.rho.is_some() || a.xmin.is_some() || a.cdf_table.is_some() {
            return Err(CliError::Usage(
                "--law and --approx blachman do not take a model".into(),
            ));
        }
        None
    } else {
        Some(args.model.build()?)
    };
    let (table, column, source) = match (args.law, args.approx, &m) {
        (Some(Law::GaussKuzmin), _, _) => {
            if args.k != 1 {
                return Err(CliError::Usage("the Gauss-Kuzmin law is for k = 1".into()));
            }
            (gauss_kuzmin_table(args.amax)?, "probability", "gauss-kuzmin")
        }
        (None, Approx::Blachman, _) => (blachman_table(args.k, args.amax)?, "probability", "blachman"),
        (None, approx, Some(m)) => {
            let model = CfModel::new(m.distribution(), args.amax)?;
            if approx == Approx::Asymptotic {
                (model.asymptotic_table(args.k)?, "approximation", m.name())
            } else {
                (model.table(args.k)?, "probability", m.name())
            }
        }
        (None, _, None) => unreachable!("a model is built unless the law is model-free"),
    };
    let mut cols: Vec<String> = (1..=args.k).map(|i| format!("a{i}")).collect();
    if args.k == 1 {
        cols[0] = "a".into();
    }
    cols.push(column.into());
    let mut t = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    match &m {
        Some(m) => model_meta(&mut t, m),
        None => t.meta("model", source),
    }
    t.meta("k", args.k);
    t.meta("amax", args.amax);
    if column != "probability" {
        t.meta("approximation_sum", table.sum());
    }
    push_cf_rows(&mut t, &table);
    Ok(t)
}

fn push_cf_rows(t: &mut Table, table: &CfTable) {
    for (bins, p) in table.iter() {
        let mut row: Vec<Cell> = bins.iter().map(|&b| bin_cell(b, table.a_max())).collect();
        row.push(p.into());
        t.push(row);
    }
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write to a file instead of stdout.
    #[arg(short = 'o', long)]
    pub output: Option<PathBuf>,
}

pub fn sample(args: &SampleArgs, format: Format) -> Result<(), CliError> {
    let m = args.model.build()?;
    let ds = match &m {
        Model::Benford(d) => sample_benford(args.n, d.base(), args.seed)?,
        Model::Pareto(p) => sample_pareto(args.n, p, args.seed),
        Model::Table(_) => return Err(CliError::Usage("sampling supports the benford and pareto models".into())),
    };
    let mut t = Table::new(&["x"]);
    model_meta(&mut t, &m);
    t.meta("n", args.n);
    t.meta("seed", args.seed);
    let write = |w: &mut dyn Write| match format {
        Format::Tsv => t.write_tsv_stream(w, ds.values()),
        Format::Json => t.write_json_stream(w, ds.values()),
    };
    match &args.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w).and_then(|_| w.flush()).map_err(Error::from)?;
        }
        None => crate::emit_with(|w| write(w))?,
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    /// Text file with one number per line, or delimited columns.
    pub path: PathBuf,
    /// 1-based column of delimited input.
    #[arg(long)]
    pub column: Option<usize>,
}

impl DatasetArgs {
    fn load(&self) -> Result<Dataset, CliError> {
        Ok(Dataset::from_path(Path::new(&self.path), self.column)?)
    }
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[arg(short = 'b', long = "base", default_value_t = 10)]
    pub base: u32,
}

pub fn fit(args: &FitArgs) -> Result<Table, CliError> {
    let ds = args.data.load()?;
    let f = fit_pareto(&ds, args.base)?;
    let mut t = Table::new(&["shape", "xmin", "rho", "n", "base"]);
    t.meta("dataset", ds.label());
    t.meta("dropped", ds.dropped());
    t.push(vec![f.s_hat.into(), f.x_m_hat.into(), f.rho_hat.into(), f.p.into(), f.base.into()]);
    Ok(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Significand,
    Digit,
    Cf,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DatasetArgs,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Fit a Pareto model to the data instead of giving its parameters.
    #[arg(long, conflicts_with_all = ["model", "shape", "rho", "xmin", "cdf_table"])]
    pub fit: bool,
    #[arg(long, value_enum, default_value_t = Target::Significand)]
    pub target: Target,
    /// Significand length, or number of coefficients for --target cf.
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    /// Digit position for --target digit.
    #[arg(short = 'j', default_value_t = 1)]
    pub j: u32,
    #[arg(long, default_value_t = DEFAULT_A_MAX)]
    pub amax: u64,
    /// Bins are merged until each expects at least this many counts.
    #[arg(long, default_value_t = DEFAULT_MIN_EXPECTED)]
    pub min_expected: f64,
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Table, CliError> {
    let ds = args.data.load()?;
    let base = args.model.base;
    let (m, fitted) = if args.fit {
        (Model::Pareto(fit_pareto(&ds, base)?.params()), 2)
    } else {
        (args.model.build()?, 0)
    };
    if ds.is_empty() {
        return Err(Error::InsufficientData(format!("{}: no usable values", ds.label())).into());
    }
    let d = m.distribution();
    let mut t = Table::new(&["bin", "last_bin", "observed", "expected"]);
    t.meta("dataset", ds.label());
    t.meta("dropped", ds.dropped());
    model_meta(&mut t, &m);
    t.meta("fitted", fitted);
    t.meta("target", format!("{:?}", args.target).to_lowercase());

    let (observed, expected, labels): (Vec<u64>, Vec<f64>, Vec<Cell>) = match args.target {
        Target::Significand => {
            let spec = SignificandSpec::new(base, args.k)?;
            t.meta("k", args.k);
            let counts = empirical_significand_freqs(&ds, spec)?;
            let pmf = match &m {
                Model::Benford(_) => benford_pmf(spec)?,
                Model::Pareto(p) => pareto_pmf(p, spec)?,
                Model::Table(tab) => general_pmf(tab, spec)?,
            };
            let labels = (spec.lo()..=spec.hi()).map(Cell::from).collect();
            (counts.counts, pmf.probabilities().to_vec(), labels)
        }
        Target::Digit => {
            let spec = SignificandSpec::new(base, args.j)?;
            t.meta("j", args.j);
            let counts = empirical_significand_freqs(&ds, spec)?.digit_counts();
            let pmf = digit_pmf(&m, args.j)?;
            let labels = pmf.iter().map(|(a, _)| Cell::from(a)).collect();
            (counts, pmf.probabilities().to_vec(), labels)
        }
        Target::Cf => {
            t.meta("k", args.k);
            t.meta("amax", args.amax);
            let table = CfModel::new(d, args.amax)?.table(args.k)?;
            let counts = empirical_cf_freqs(&ds, base, args.k, args.amax)?;
            t.meta("cf_dropped", counts.dropped);
            let labels = (0..table.probabilities().len())
                .map(|i| Cell::from(cf_label(&table.bins_of(i), args.amax)))
                .collect();
            (counts.counts, table.probabilities().to_vec(), labels)
        }
    };
    let report = chi_square_test(&observed, &expected, args.min_expected, fitted)?;
    report_rows(&mut t, &report, &labels);
    Ok(t)
}

fn report_rows(t: &mut Table, r: &EmpiricalReport, labels: &[Cell]) {
    t.meta("n", r.sample_size);
    t.meta("statistic", r.statistic);
    t.meta("dof", r.dof);
    t.meta("p_value", r.p_value);
    t.meta("bins_merged", r.bins_merged);
    for (i, &start) in r.group_start.iter().enumerate() {
        let end = r.group_start.get(i + 1).map_or(labels.len(), |&s| s) - 1;
        t.push(vec![
            labels[start].clone(),
            labels[end].clone(),
            r.observed[i].into(),
            r.expected[i].into(),
        ]);
    }
}
