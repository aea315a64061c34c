//! The `inkbasis` command line.
//!
//! All data goes to files under `--out`; diagnostics go to stderr. Exit code
//! 2 is used for usage problems (bad flags, missing input), 1 for failures
//! while running.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::basis::{build_basis, synthesize, BasisKind, OrthoBasis};
use crate::classify::{accuracy_sweep, match_symbol, normalize_all, representation_error, SweepConfig};
use crate::error::Error;
use crate::ink::{
    parse_inkml_symbols, parse_pendigits, read_coeffs_jsonl, to_coeffs, write_coeffs_jsonl, InkTrace,
    SplineOrder, SymbolCoeffs,
};

/// Default input root for relative `--input` paths.
pub const DATA_DIR_ENV: &str = "INKBASIS_DATA_DIR";

#[derive(Debug, Parser)]
#[command(name = "inkbasis", version, about = "Digital ink as orthogonal-series curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct BasisArgs {
    /// legendre | chebyshev | legendre-sobolev | chebyshev-sobolev
    #[arg(long, default_value = "chebyshev-sobolev")]
    pub basis: BasisKind,
    /// Sobolev weight λ (ignored by the plain bases)
    #[arg(long, default_value_t = crate::DEFAULT_LAMBDA)]
    pub lambda: f64,
    /// Truncation degree d
    #[arg(long, default_value_t = crate::DEFAULT_DEGREE)]
    pub degree: usize,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Pendigits text file, or an InkML document (.inkml / .xml)
    #[arg(long)]
    pub input: PathBuf,
    /// linear | cubic
    #[arg(long, default_value = "linear")]
    pub spline: SplineOrder,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the truncated-series curve of every trace (CSV per trace) and
    /// write the coefficient vectors.
    Approximate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        basis: BasisArgs,
        /// Uniform parameter samples per curve
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample curves back from a coefficient file.
    Reconstruct {
        /// JSON-lines coefficient file
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Representation error of every trace for a list of degrees.
    ErrorSweep {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        basis: BasisArgs,
        /// Degrees as a comma list with optional ranges, e.g. `3-20` or `3,7,10,15`
        #[arg(long, default_value = "3-20")]
        degrees: String,
        /// Output CSV file
        #[arg(long)]
        out: PathBuf,
    },
    /// kNN accuracy over a range of k for each basis kind.
    KnnEval {
        #[command(flatten)]
        input: InputArgs,
        /// Basis kinds to compare (repeatable); all four by default
        #[arg(long = "basis")]
        kinds: Vec<BasisKind>,
        #[arg(long, default_value_t = crate::DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(long, default_value_t = crate::DEFAULT_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Training fraction
        #[arg(long, default_value_t = 2.0 / 3.0)]
        split: f64,
        /// Classify the training set itself instead of a held-out split
        #[arg(long)]
        resubstitution: bool,
        /// Output directory (knn.csv, summary.json)
        #[arg(long)]
        out: PathBuf,
    },
    /// Construct a basis and export it as JSON.
    BuildBasis {
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Find the closest model to one sample.
    Match {
        /// JSON-lines file holding the sample
        #[arg(long)]
        sample: PathBuf,
        /// Record of the sample file to use
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// JSON-lines file of models
        #[arg(long)]
        models: PathBuf,
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Run(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(Error::Io(e))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_basis_args(b: &BasisArgs) -> CliResult<()> {
    check_lambda_degree(b.lambda, b.degree)
}

fn check_lambda_degree(lambda: f64, degree: usize) -> CliResult<()> {
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(usage(format!("--lambda must be >= 0, got {lambda}")));
    }
    if degree < 1 {
        return Err(usage("--degree must be at least 1"));
    }
    if degree > crate::basis::MAX_BASIS_DEGREE {
        return Err(usage(format!(
            "--degree must be at most {}",
            crate::basis::MAX_BASIS_DEGREE
        )));
    }
    Ok(())
}

/// Existing path as given, else relative to `$INKBASIS_DATA_DIR`.
pub fn resolve_input(path: &Path) -> CliResult<PathBuf> {
    if path.exists() {
        return Ok(path.to_path_buf());
    }
    if path.is_relative() {
        if let Some(root) = std::env::var_os(DATA_DIR_ENV) {
            let candidate = Path::new(&root).join(path);
            if candidate.exists() {
                return Ok(candidate);
            }
        }
    }
    Err(usage(format!("input not found: {}", path.display())))
}

fn is_inkml(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
        Some("inkml" | "xml")
    )
}

/// Reads traces from a pendigits file or an InkML document (one trace per
/// symbol group, strokes joined).
pub fn load_traces(path: &Path) -> CliResult<Vec<InkTrace>> {
    let path = resolve_input(path)?;
    if is_inkml(&path) {
        Ok(parse_inkml_symbols(&fs::read_to_string(&path)?)?)
    } else {
        Ok(parse_pendigits(BufReader::new(fs::File::open(&path)?))?)
    }
}

fn load_coeffs(path: &Path) -> CliResult<Vec<SymbolCoeffs>> {
    let path = resolve_input(path)?;
    Ok(read_coeffs_jsonl(BufReader::new(fs::File::open(path)?))?)
}

fn basis_from(b: &BasisArgs) -> CliResult<OrthoBasis> {
    Ok(build_basis(b.basis.spec(b.lambda)?, b.degree)?)
}

/// Parses `3-20` / `3,7,10,15` / `1-3,8` into a sorted, deduplicated list.
pub fn parse_degrees(text: &str) -> CliResult<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad degree '{s}'")))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(usage(format!("empty degree range '{part}'")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(usage("no degrees given"));
    }
    if out[0] < 1 || *out.last().unwrap() > crate::basis::MAX_BASIS_DEGREE {
        return Err(usage(format!(
            "degrees must lie in 1..={}",
            crate::basis::MAX_BASIS_DEGREE
        )));
    }
    Ok(out)
}

fn uniform_samples(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Approximation samples of one symbol as CSV rows (`s,x,y,approx`) in the
/// input frame when the coefficients carry one.
fn approx_rows(c: &SymbolCoeffs, basis: &OrthoBasis, samples: usize, csv: &mut String) -> CliResult<()> {
    let mut xs = vec![0.0];
    xs.extend(&c.xs);
    let mut ys = vec![0.0];
    ys.extend(&c.ys);
    let px = synthesize(&xs, basis)?;
    let py = synthesize(&ys, basis)?;
    let (x0, y0, half) = match c.frame {
        Some(f) => (f.x0, f.y0, 0.5 * f.length),
        None => (0.0, 0.0, 1.0),
    };
    for s in uniform_samples(samples) {
        let _ = writeln!(csv, "{s},{},{},approx", x0 + half * px.eval(s), y0 + half * py.eval(s));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Approximate {
            input,
            basis,
            samples,
            out,
        } => {
            check_basis_args(&basis)?;
            let traces = load_traces(&input.input)?;
            let b = basis_from(&basis)?;
            let normalized = normalize_all(&traces, input.spline)?;
            let coeffs: Vec<SymbolCoeffs> = normalized
                .par_iter()
                .map(|n| to_coeffs(n, &b))
                .collect::<Result<_, _>>()?;
            fs::create_dir_all(&out)?;
            for (i, ((t, n), c)) in traces.iter().zip(&normalized).zip(&coeffs).enumerate() {
                let mut csv = String::from("s,x,y,kind\n");
                approx_rows(c, &b, samples, &mut csv)?;
                for (s, p) in n.knots.iter().zip(t.points()) {
                    let _ = writeln!(csv, "{s},{},{},original", p.x, p.y);
                }
                write_file(&out.join(format!("trace_{i:05}.csv")), &csv)?;
            }
            let f = fs::File::create(out.join("coeffs.jsonl"))?;
            write_coeffs_jsonl(BufWriter::new(f), &coeffs)?;
            eprintln!("wrote {} traces to {}", traces.len(), out.display());
        }
        Command::Reconstruct {
            input,
            basis,
            samples,
            out,
        } => {
            check_basis_args(&basis)?;
            let b = basis_from(&basis)?;
            let coeffs = load_coeffs(&input)?;
            fs::create_dir_all(&out)?;
            for (i, c) in coeffs.iter().enumerate() {
                if c.basis_id != b.id() {
                    return Err(Error::BasisMismatch(format!(
                        "record {i} is for '{}', not '{}'",
                        c.basis_id,
                        b.id()
                    ))
                    .into());
                }
                let mut csv = String::from("s,x,y,kind\n");
                approx_rows(c, &b, samples, &mut csv)?;
                write_file(&out.join(format!("symbol_{i:05}.csv")), &csv)?;
            }
            eprintln!("wrote {} symbols to {}", coeffs.len(), out.display());
        }
        Command::ErrorSweep {
            input,
            basis,
            degrees,
            out,
        } => {
            check_basis_args(&basis)?;
            let degrees = parse_degrees(&degrees)?;
            let traces = load_traces(&input.input)?;
            let max_d = *degrees.last().unwrap();
            let full = build_basis(basis.basis.spec(basis.lambda)?, max_d)?;
            let bases: Vec<OrthoBasis> = degrees
                .iter()
                .map(|&d| full.truncated(d))
                .collect::<Result<_, _>>()?;
            let normalized = normalize_all(&traces, input.spline)?;
            let rows: Vec<String> = traces
                .par_iter()
                .zip(&normalized)
                .enumerate()
                .map(|(i, (t, n))| {
                    let mut rows = String::new();
                    for (d, b) in degrees.iter().zip(&bases) {
                        let c = to_coeffs(n, b)?;
                        let e = representation_error(t, n, &c, b)?;
                        let _ = writeln!(rows, "{i},{d},{e}");
                    }
                    Ok(rows)
                })
                .collect::<Result<_, Error>>()?;
            let mut csv = String::from("trace_id,degree,error\n");
            rows.iter().for_each(|r| csv.push_str(r));
            write_file(&out, &csv)?;
            eprintln!("wrote {} traces x {} degrees to {}", traces.len(), degrees.len(), out.display());
        }
        Command::KnnEval {
            input,
            kinds,
            lambda,
            degree,
            k_min,
            k_max,
            seed,
            split,
            resubstitution,
            out,
        } => {
            check_lambda_degree(lambda, degree)?;
            if k_min < 1 || k_min > k_max {
                return Err(usage(format!("need 1 <= k-min <= k-max, got {k_min}..{k_max}")));
            }
            if !(split > 0.0 && split < 1.0) {
                return Err(usage(format!("--split must be in (0, 1), got {split}")));
            }
            let traces = load_traces(&input.input)?;
            let config = SweepConfig {
                kinds: if kinds.is_empty() {
                    BasisKind::ALL.to_vec()
                } else {
                    kinds
                },
                degree,
                lambda,
                spline: input.spline,
                k_min,
                k_max,
                seed,
                ratio: split,
                resubstitution,
            };
            let table = accuracy_sweep(&traces, &config)?;
            fs::create_dir_all(&out)?;
            write_file(&out.join("knn.csv"), &table.to_csv())?;
            let summary = serde_json::to_string_pretty(&table.summary()).map_err(Error::from)?;
            write_file(&out.join("summary.json"), &(summary + "\n"))?;
            eprintln!(
                "train {} / test {}; wrote {}",
                table.n_train,
                table.n_test,
                out.display()
            );
        }
        Command::BuildBasis { basis, out } => {
            check_basis_args(&basis)?;
            let b = basis_from(&basis)?;
            write_file(&out, &(b.to_json()? + "\n"))?;
        }
        Command::Match {
            sample,
            index,
            models,
            basis,
            out,
        } => {
            check_basis_args(&basis)?;
            let b = basis_from(&basis)?;
            let samples = load_coeffs(&sample)?;
            let sample = samples
                .get(index)
                .ok_or_else(|| usage(format!("sample file has no record {index}")))?;
            let models = load_coeffs(&models)?;
            let m = match_symbol(sample, &models, &b)?;
            let json = serde_json::to_string(&m).map_err(Error::from)?;
            write_file(&out, &(json + "\n"))?;
        }
    }
    Ok(())
}
